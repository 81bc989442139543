// sph4r: dimensional synthesis of spherical 4R path generators.
//
// Subcommands:
//   synthesize  run the evolutionary search on a problem file
//   verify      evaluate a stored design vector against a problem
//   trace       sample the generated trajectory of a design over a revolution
//   thetadiff   input-angle differences of a free-timing design/result
//
// Exit codes: 0 success, 1 validation error, 2 infeasible verification.

#include <chrono>
#include <cstdio>
#include <future>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "sph4r/io.hpp"

namespace {

using namespace sph4r;

struct SynthesizeArgs {
    std::string problem_file;
    std::optional<std::uint64_t> seed;
    std::optional<int> seeds;
    std::optional<int> pop;
    std::optional<int> gens;
    std::optional<double> cr;
    std::optional<double> f_lo;
    std::optional<double> f_hi;
    std::optional<std::string> out;
};

DEConfig make_config(const ProblemSpec& spec) {
    DEConfig config;
    config.population_size = spec.population;
    config.max_generations = spec.generations;
    config.cr = spec.cr;
    config.f_lo = spec.f_lo;
    config.f_hi = spec.f_hi;
    config.seed = spec.seed;
    const DesignBounds b = spec.bounds();
    config.lower = b.lower;
    config.upper = b.upper;
    config.kinds = b.kinds;
    if (spec.mode == DesignMode::free_timing) {
        config.theta_begin = 0;
        config.theta_end = spec.path.size();
    }
    return config;
}

ResultData make_result(const ProblemSpec& spec, const DesignVector& design, double f_ob,
                       std::uint64_t seed, double runtime_seconds) {
    ResultData result;
    result.design = design;
    result.point_count = spec.path.size();
    result.f_ob = f_ob;
    result.seed = seed;
    result.runtime_seconds = runtime_seconds;
    const EvaluationReport report = structural_error(design, spec.path, spec.timing);
    result.geodesic_errors = report.geodesic_errors;
    const DecodedDesign decoded = decode(design, spec.path.size(), spec.timing);
    result.link_lengths = decoded.mechanism.link_lengths();
    result.grashof = grashof_check(result.link_lengths);
    result.theta0 = decoded.mechanism.theta0();
    result.phi0 = decoded.mechanism.phi0();
    return result;
}

void print_design_summary(const ResultData& r) {
    const bool prescribed = r.design.mode == DesignMode::prescribed;
    const int tc = prescribed ? 1 : r.point_count;
    const double* v = r.design.values.data();
    std::printf("f_ob        %.9e\n", r.f_ob);
    if (prescribed) std::printf("theta1      %.6f\n", v[0]);
    std::printf("beta        %.6f\n", v[tc]);
    std::printf("gamma       %.6f\n", v[tc + 1]);
    std::printf("phi         %.6f %.6f %.6f %.6f\n", v[tc + 2], v[tc + 3], v[tc + 4], v[tc + 5]);
    std::printf("eta         %.6f %.6f %.6f %.6f\n", v[tc + 6], v[tc + 7], v[tc + 8], v[tc + 9]);
    std::printf("alpha       %.6f %.6f %.6f %.6f\n", r.link_lengths[0], r.link_lengths[1],
                r.link_lengths[2], r.link_lengths[3]);
    std::printf("grashof     %s\n", r.grashof ? "true" : "false");
    std::printf("theta0/phi0 %.6f %.6f\n", r.theta0, r.phi0);
}

int cmd_synthesize(const SynthesizeArgs& args) {
    ProblemSpec spec = load_problem(args.problem_file);
    if (args.seed) spec.seed = *args.seed;
    if (args.seeds) spec.seeds = *args.seeds;
    if (args.pop) spec.population = *args.pop;
    if (args.gens) spec.generations = *args.gens;
    if (args.cr) spec.cr = *args.cr;
    if (args.f_lo) spec.f_lo = *args.f_lo;
    if (args.f_hi) spec.f_hi = *args.f_hi;
    if (args.out) spec.out_path = *args.out;
    if (spec.seeds < 1) throw ParseError("--seeds must be >= 1");

    const SynthesisProblem problem = spec.problem();
    const ObjectiveFn objective = [&problem](const std::vector<double>& x) {
        return problem.evaluate(x);
    };

    const auto t0 = std::chrono::steady_clock::now();
    // Independent seeds spec.seed .. spec.seed + seeds - 1; best one wins.
    std::vector<std::future<DEResult>> futures;
    futures.reserve(static_cast<std::size_t>(spec.seeds));
    for (int s = 0; s < spec.seeds; ++s) {
        DEConfig config = make_config(spec);
        config.seed = spec.seed + static_cast<std::uint64_t>(s);
        futures.push_back(std::async(std::launch::async, [config, &objective]() {
            return run(objective, config);
        }));
    }
    std::optional<DEResult> best;
    std::uint64_t best_seed = spec.seed;
    for (int s = 0; s < spec.seeds; ++s) {
        DEResult r = futures[static_cast<std::size_t>(s)].get();
        std::fprintf(stderr, "seed %llu: best f_ob = %.9e\n",
                     static_cast<unsigned long long>(spec.seed + static_cast<std::uint64_t>(s)),
                     r.best_fitness);
        if (!best || r.best_fitness < best->best_fitness) {
            best_seed = spec.seed + static_cast<std::uint64_t>(s);
            best = std::move(r);
        }
    }
    const double runtime =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const DesignVector design = problem.to_design(best->best);
    const ResultData result = make_result(spec, design, best->best_fitness, best_seed, runtime);
    print_design_summary(result);
    std::printf("runtime_s   %.2f\n", runtime);
    if (!spec.out_path.empty()) {
        write_result(spec.out_path, result);
        std::printf("result      %s\n", spec.out_path.c_str());
    }
    if (!spec.convergence_path.empty()) {
        write_convergence_csv(spec.convergence_path, best->history);
        std::printf("convergence %s\n", spec.convergence_path.c_str());
    }
    return 0;
}

int cmd_verify(const std::string& design_file, const std::string& problem_file) {
    const ProblemSpec spec = load_problem(problem_file);
    const DesignFile df = load_design(design_file);
    if (df.design.mode != spec.mode) throw ParseError("design/problem mode mismatch");
    if (df.point_count != spec.path.size()) {
        throw ParseError("design is for " + std::to_string(df.point_count) + " points, problem has " +
                         std::to_string(spec.path.size()));
    }

    const EvaluationReport report = structural_error(df.design, spec.path, spec.timing);
    ResultData result = make_result(spec, df.design, report.f_ob, 0, 0.0);
    print_design_summary(result);
    std::printf("feasible    %s\n", report.feasible ? "true" : "false");
    std::printf("point errors (squared chordal / geodesic):\n");
    for (std::size_t i = 0; i < report.per_point_errors.size(); ++i) {
        std::printf("  %3zu  %.9e  %.9e\n", i + 1, report.per_point_errors[i],
                    report.geodesic_errors[i]);
    }
    if (df.design.mode == DesignMode::free_timing) {
        const std::vector<double> thetas(df.design.values.begin(),
                                         df.design.values.begin() + df.point_count);
        const ThetaDiffs diffs = theta_differences(thetas);
        std::printf("dtheta_mean %.9f\n", diffs.mean);
    }
    if (df.stored_f_ob) {
        std::printf("stored f_ob %.9e (recomputed %.9e)\n", *df.stored_f_ob, report.f_ob);
    }
    return report.feasible ? 0 : 2;
}

int cmd_trace(const std::string& design_file, int samples, const std::string& out_file) {
    const DesignFile df = load_design(design_file);
    const DecodedDesign decoded = decode(df.design, df.point_count);
    const Branch branch = select_branch(decoded.mechanism);
    write_trace_csv(out_file, decoded.mechanism, branch, samples);
    std::printf("trace       %s (%d samples)\n", out_file.c_str(), samples);
    return 0;
}

int cmd_thetadiff(const std::string& design_file) {
    const DesignFile df = load_design(design_file);
    if (df.design.mode != DesignMode::free_timing) {
        throw ParseError("thetadiff needs a free-timing design/result file");
    }
    const std::vector<double> thetas(df.design.values.begin(),
                                     df.design.values.begin() + df.point_count);
    const ThetaDiffs diffs = theta_differences(thetas);
    std::printf("k,dtheta\n");
    for (std::size_t k = 0; k < diffs.diffs.size(); ++k) {
        std::printf("%zu,%.17g\n", k + 1, diffs.diffs[k]);
    }
    const double spacing = kTwoPi / df.point_count;
    std::printf("mean %.9f\n", diffs.mean);
    std::printf("abs_mean_minus_uniform %.9e\n", std::abs(diffs.mean - spacing));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal dimensional synthesis of spherical 4R path-generating linkages"};
    app.require_subcommand(1);

    SynthesizeArgs syn;
    auto* synth = app.add_subcommand("synthesize", "Run the evolutionary synthesis on a problem file");
    synth->add_option("--problem", syn.problem_file, "Problem file")->required();
    synth->add_option("--seed", syn.seed, "RNG seed (overrides problem file)");
    synth->add_option("--seeds", syn.seeds, "Number of independent seeds; best result wins");
    synth->add_option("--pop", syn.pop, "Population size");
    synth->add_option("--gens", syn.gens, "Generations");
    synth->add_option("--cr", syn.cr, "Crossover probability");
    synth->add_option("--f-lo", syn.f_lo, "Dither lower bound for F");
    synth->add_option("--f-hi", syn.f_hi, "Dither upper bound for F (== f-lo for fixed F)");
    synth->add_option("--out", syn.out, "Result file path");

    std::string verify_design, verify_problem;
    auto* verify = app.add_subcommand("verify", "Evaluate a design vector against a problem");
    verify->add_option("--design", verify_design, "Design or result file")->required();
    verify->add_option("--problem", verify_problem, "Problem file")->required();

    std::string trace_design, trace_out = "trace.csv";
    int trace_samples = 360;
    auto* trace = app.add_subcommand("trace", "Sample the generated trajectory over a revolution");
    trace->add_option("--design", trace_design, "Design or result file")->required();
    trace->add_option("--samples", trace_samples, "Sample count over [0, 2*pi]");
    trace->add_option("--out", trace_out, "Output CSV path");

    std::string thetadiff_design;
    auto* thetadiff = app.add_subcommand("thetadiff", "Input-angle differences of a free-timing design");
    thetadiff->add_option("--design", thetadiff_design, "Design or result file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return cmd_synthesize(syn);
        if (verify->parsed()) return cmd_verify(verify_design, verify_problem);
        if (trace->parsed()) return cmd_trace(trace_design, trace_samples, trace_out);
        if (thetadiff->parsed()) return cmd_thetadiff(thetadiff_design);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
