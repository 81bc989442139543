#include "sph4r/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace sph4r {

namespace {

std::string strip_comment(const std::string& line) {
    const auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

double to_double(const std::string& s, const std::string& context) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(context + ": not a number: '" + s + "'");
    }
}

long to_long(const std::string& s, const std::string& context) {
    try {
        std::size_t used = 0;
        const long v = std::stol(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(context + ": not an integer: '" + s + "'");
    }
}

std::string resolve(const std::string& base_file, const std::string& relative) {
    const std::filesystem::path p(relative);
    if (p.is_absolute()) return relative;
    return (std::filesystem::path(base_file).parent_path() / p).string();
}

DesignMode parse_mode(const std::string& word, const std::string& context) {
    if (word == "prescribed") return DesignMode::prescribed;
    if (word == "free") return DesignMode::free_timing;
    throw ParseError(context + ": mode must be 'prescribed' or 'free', got '" + word + "'");
}

void expect_values(const std::vector<std::string>& tokens, std::size_t count,
                   const std::string& context) {
    if (tokens.size() != count + 1) {
        throw ParseError(context + ": key '" + tokens[0] + "' expects " + std::to_string(count) +
                         " value(s)");
    }
}

std::string format_full(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace

DesignBounds ProblemSpec::bounds() const {
    DesignBounds b = design_bounds(mode, path.size());
    if (pinned_theta1.has_value()) {
        b.lower[0] = *pinned_theta1;
        b.upper[0] = *pinned_theta1;
    }
    return b;
}

ProblemSpec load_problem(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open problem file: " + file);

    ProblemSpec spec;
    bool saw_mode = false, saw_points = false, saw_timing = false;
    std::string timing_kind;
    double timing_spacing = 0.0;
    std::string timing_list_file;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto tokens = tokenize(strip_comment(line));
        if (tokens.empty()) continue;
        const std::string ctx = file + ":" + std::to_string(lineno);
        const std::string& key = tokens[0];
        if (key == "mode") {
            expect_values(tokens, 1, ctx);
            spec.mode = parse_mode(tokens[1], ctx);
            saw_mode = true;
        } else if (key == "points") {
            expect_values(tokens, 1, ctx);
            spec.path = TargetPath::from_points(load_points_csv(resolve(file, tokens[1])));
            saw_points = true;
        } else if (key == "timing") {
            if (tokens.size() < 2) throw ParseError(ctx + ": timing needs a kind");
            timing_kind = tokens[1];
            if (timing_kind == "uniform") {
                expect_values(tokens, 1, ctx);
            } else if (timing_kind == "spacing") {
                expect_values(tokens, 2, ctx);
                timing_spacing = to_double(tokens[2], ctx);
            } else if (timing_kind == "list") {
                expect_values(tokens, 2, ctx);
                timing_list_file = resolve(file, tokens[2]);
            } else {
                throw ParseError(ctx + ": timing kind must be uniform, spacing or list");
            }
            saw_timing = true;
        } else if (key == "pop") {
            expect_values(tokens, 1, ctx);
            spec.population = static_cast<int>(to_long(tokens[1], ctx));
        } else if (key == "gens") {
            expect_values(tokens, 1, ctx);
            spec.generations = static_cast<int>(to_long(tokens[1], ctx));
        } else if (key == "cr") {
            expect_values(tokens, 1, ctx);
            spec.cr = to_double(tokens[1], ctx);
        } else if (key == "f_lo") {
            expect_values(tokens, 1, ctx);
            spec.f_lo = to_double(tokens[1], ctx);
        } else if (key == "f_hi") {
            expect_values(tokens, 1, ctx);
            spec.f_hi = to_double(tokens[1], ctx);
        } else if (key == "seed") {
            expect_values(tokens, 1, ctx);
            spec.seed = static_cast<std::uint64_t>(to_long(tokens[1], ctx));
        } else if (key == "seeds") {
            expect_values(tokens, 1, ctx);
            spec.seeds = static_cast<int>(to_long(tokens[1], ctx));
        } else if (key == "out") {
            // Output paths are invocation-relative, unlike the input paths.
            expect_values(tokens, 1, ctx);
            spec.out_path = tokens[1];
        } else if (key == "convergence") {
            expect_values(tokens, 1, ctx);
            spec.convergence_path = tokens[1];
        } else {
            throw ParseError(ctx + ": unknown key '" + key + "'");
        }
    }
    if (!saw_mode) throw ParseError(file + ": missing 'mode'");
    if (!saw_points) throw ParseError(file + ": missing 'points'");
    if (spec.mode == DesignMode::free_timing && saw_timing) {
        throw ParseError(file + ": 'timing' is only valid in prescribed mode");
    }

    const int n = spec.path.size();
    if (spec.mode == DesignMode::prescribed) {
        if (timing_kind.empty() || timing_kind == "uniform") {
            spec.timing = Timing::uniform(n);
        } else if (timing_kind == "spacing") {
            spec.timing = Timing::with_spacing(n, timing_spacing);
        } else {
            const auto absolute = load_angle_list(timing_list_file);
            if (static_cast<int>(absolute.size()) != n) {
                throw ParseError(file + ": timing list has " + std::to_string(absolute.size()) +
                                 " angles for " + std::to_string(n) + " points");
            }
            spec.timing = Timing::from_list(absolute);
            spec.pinned_theta1 = absolute.front();
        }
    }
    return spec;
}

namespace {

struct KeyedValues {
    std::vector<std::string> keys;                 // in file order
    std::vector<std::vector<double>> values;       // numbers after each key
    std::optional<std::string> mode_word;

    const std::vector<double>* find(const std::string& key) const {
        for (std::size_t i = 0; i < keys.size(); ++i) {
            if (keys[i] == key) return &values[i];
        }
        return nullptr;
    }
};

KeyedValues read_keyed_file(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open file: " + file);
    KeyedValues kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto tokens = tokenize(strip_comment(line));
        if (tokens.empty()) continue;
        const std::string ctx = file + ":" + std::to_string(lineno);
        if (tokens[0] == "mode") {
            expect_values(tokens, 1, ctx);
            kv.mode_word = tokens[1];
            continue;
        }
        std::vector<double> nums;
        nums.reserve(tokens.size() - 1);
        for (std::size_t t = 1; t < tokens.size(); ++t) {
            if (tokens[t] == "true" || tokens[t] == "false") {
                nums.push_back(tokens[t] == "true" ? 1.0 : 0.0);
            } else {
                nums.push_back(to_double(tokens[t], ctx));
            }
        }
        kv.keys.push_back(tokens[0]);
        kv.values.push_back(std::move(nums));
    }
    return kv;
}

const std::vector<double>& require(const KeyedValues& kv, const std::string& key,
                                   std::size_t count, const std::string& file) {
    const auto* vals = kv.find(key);
    if (!vals) throw ParseError(file + ": missing key '" + key + "'");
    if (vals->size() != count) {
        throw ParseError(file + ": key '" + key + "' expects " + std::to_string(count) +
                         " value(s), got " + std::to_string(vals->size()));
    }
    return *vals;
}

}  // namespace

DesignFile load_design(const std::string& file) {
    const KeyedValues kv = read_keyed_file(file);
    if (!kv.mode_word) throw ParseError(file + ": missing 'mode'");
    DesignFile df;
    df.design.mode = parse_mode(*kv.mode_word, file);
    df.point_count = static_cast<int>(require(kv, "n", 1, file)[0]);
    if (df.point_count < 1) throw ParseError(file + ": n must be positive");

    std::vector<double> thetas;
    if (df.design.mode == DesignMode::prescribed) {
        thetas.push_back(require(kv, "theta1", 1, file)[0]);
    } else {
        thetas = require(kv, "thetas", static_cast<std::size_t>(df.point_count), file);
    }
    df.design.values = thetas;
    df.design.values.push_back(require(kv, "beta", 1, file)[0]);
    df.design.values.push_back(require(kv, "gamma", 1, file)[0]);
    const auto& phi = require(kv, "phi", 4, file);
    const auto& eta = require(kv, "eta", 4, file);
    df.design.values.insert(df.design.values.end(), phi.begin(), phi.end());
    df.design.values.insert(df.design.values.end(), eta.begin(), eta.end());

    if (const auto* f = kv.find("f_ob"); f && f->size() == 1) df.stored_f_ob = (*f)[0];
    return df;
}

void write_result(const std::string& file, const ResultData& result) {
    std::ofstream out(file);
    if (!out) throw ParseError("cannot open for writing: " + file);
    const int n = result.point_count;
    const bool prescribed = result.design.mode == DesignMode::prescribed;
    const int tc = prescribed ? 1 : n;
    const double* v = result.design.values.data();

    out << "mode " << (prescribed ? "prescribed" : "free") << "\n";
    out << "n " << n << "\n";
    if (prescribed) {
        out << "theta1 " << format_full(v[0]) << "\n";
    } else {
        out << "thetas";
        for (int k = 0; k < n; ++k) out << ' ' << format_full(v[k]);
        out << "\n";
    }
    out << "beta " << format_full(v[tc]) << "\n";
    out << "gamma " << format_full(v[tc + 1]) << "\n";
    out << "phi";
    for (int k = 0; k < 4; ++k) out << ' ' << format_full(v[tc + 2 + k]);
    out << "\n";
    out << "eta";
    for (int k = 0; k < 4; ++k) out << ' ' << format_full(v[tc + 6 + k]);
    out << "\n";
    out << "f_ob " << format_full(result.f_ob) << "\n";
    out << "alpha";
    for (double a : result.link_lengths) out << ' ' << format_full(a);
    out << "\n";
    out << "grashof " << (result.grashof ? "true" : "false") << "\n";
    out << "theta0 " << format_full(result.theta0) << "\n";
    out << "phi0 " << format_full(result.phi0) << "\n";
    if (!result.geodesic_errors.empty()) {
        out << "geodesic_errors";
        for (double e : result.geodesic_errors) out << ' ' << format_full(e);
        out << "\n";
    }
    out << "seed " << result.seed << "\n";
    out << "runtime_s " << format_full(result.runtime_seconds) << "\n";
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool looks_numeric(const std::string& cell) {
    try {
        std::size_t used = 0;
        std::stod(cell, &used);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

std::vector<Vec3> load_points_csv(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open points file: " + file);
    std::vector<Vec3> points;
    std::string line;
    int lineno = 0;
    bool first_row = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(trim(cell));
        if (first_row) {
            first_row = false;
            if (!cells.empty() && !looks_numeric(cells[0])) continue;  // header row
        }
        if (cells.size() != 3) {
            throw ParseError(file + ":" + std::to_string(lineno) + ": expected 3 columns");
        }
        const std::string ctx = file + ":" + std::to_string(lineno);
        points.push_back(
            Vec3{to_double(cells[0], ctx), to_double(cells[1], ctx), to_double(cells[2], ctx)});
    }
    return points;
}

std::vector<double> load_angle_list(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open angle list: " + file);
    std::vector<double> angles;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto tokens = tokenize(strip_comment(line));
        if (tokens.empty()) continue;
        if (lineno == 1 && tokens.size() == 1 && tokens[0] == "theta") continue;  // header
        for (const auto& t : tokens) {
            angles.push_back(to_double(t, file + ":" + std::to_string(lineno)));
        }
    }
    return angles;
}

void write_convergence_csv(const std::string& file, const std::vector<GenerationRecord>& history) {
    std::ofstream out(file);
    if (!out) throw ParseError("cannot open for writing: " + file);
    out << "generation,best_f_ob,mean_f_ob\n";
    out.precision(17);
    for (const auto& rec : history) {
        out << rec.generation << ',' << rec.best_f << ',' << rec.mean_f << "\n";
    }
}

void write_trace_csv(const std::string& file, const SphericalFourBar& mech, Branch branch,
                     int samples) {
    if (samples < 1) throw std::invalid_argument("write_trace_csv: samples must be >= 1");
    std::ofstream out(file);
    if (!out) throw ParseError("cannot open for writing: " + file);
    out << "theta,gen_x,gen_y,gen_z,r2_x,r2_y,r2_z,r3_x,r3_y,r3_z,feasible\n";
    out.precision(17);
    std::optional<CouplerState> state;
    std::optional<UnitVector3> gen;
    for (int s = 0; s < samples; ++s) {
        const double theta = samples == 1 ? 0.0 : kTwoPi * s / (samples - 1);
        const UnitVector3 r2 = input_point(mech, theta);
        const auto status = try_coupler_state(mech, theta, branch, state);
        out << theta << ',';
        if (status == TrajectoryStatus::ok) {
            try_generated_point(mech, theta, branch, gen);
        } else {
            gen.reset();
        }
        if (gen) {
            out << gen->x() << ',' << gen->y() << ',' << gen->z() << ',';
        } else {
            out << ",,,";
        }
        out << r2.x() << ',' << r2.y() << ',' << r2.z() << ',';
        if (state && status == TrajectoryStatus::ok) {
            out << state->r3.x() << ',' << state->r3.y() << ',' << state->r3.z() << ',';
        } else {
            out << ",,,";
        }
        out << (status == TrajectoryStatus::ok && gen ? 1 : 0) << "\n";
    }
}

}  // namespace sph4r
