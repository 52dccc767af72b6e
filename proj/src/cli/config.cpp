#include "rabilab/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace rabilab::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Source {
    std::string value;
    int line = 0;
    std::string key;
};

[[noreturn]] void bad_value(const Source& s, const std::string& what) {
    throw ParseError("line " + std::to_string(s.line) + ": key '" + s.key + "': " + what + ", got '" + s.value + "'",
                     s.line, s.key);
}

template <class T>
T parse_number(const Source& s, const std::string& text) {
    T out{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, out);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        bad_value(s, std::is_integral_v<T> ? "expected an integer" : "expected a real number");
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(out)) bad_value(s, "expected a finite real number");
    }
    return out;
}

double as_real(const Source& s) { return parse_number<double>(s, s.value); }
int as_int(const Source& s) { return parse_number<int>(s, s.value); }

template <class T>
std::vector<T> as_list(const Source& s) {
    std::vector<T> out;
    std::stringstream in(s.value);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_number<T>(s, trim(item)));
    if (out.empty()) bad_value(s, "expected a comma-separated list");
    return out;
}

std::vector<double> period_grid(int count, double omega0) {
    std::vector<double> t;
    for (int j = 0; j < count; ++j) t.push_back(2.0 * std::numbers::pi * j / (omega0 * count));
    return t;
}

struct Field {
    SchemaEntry doc;
    std::function<void(RunConfig&, const Source&)> apply;
};

// Grids that depend on omega0 are rebuilt after all keys are applied.
struct Pending {
    int sweep_samples = 16;
    int transform_samples = 8;
    int sweep_max_n = 5;
    int sweep_max_k = 3;
    int p_max = 0;
    int l_max = 200;
    double tail_tolerance = 1e-12;
};

std::vector<Field> fields(Pending& pending) {
    std::vector<Field> f;
    auto add = [&](std::string key, std::string def, std::string doc, std::function<void(RunConfig&, const Source&)> fn) {
        f.push_back({{std::move(key), std::move(def), std::move(doc)}, std::move(fn)});
    };
    add("command", "", "check-identities | sweep | fock-limit | transform-limit | evolve | compare | diagram",
        [](RunConfig& c, const Source& s) {
            try {
                c.command = command_from_name(s.value);
            } catch (const ParseError&) {
                bad_value(s, "unknown command");
            }
        });
    add("model.omega", "", "two-level splitting Omega", [](RunConfig& c, const Source& s) { c.params.omega = as_real(s); });
    add("model.omega0", "", "field frequency omega0", [](RunConfig& c, const Source& s) { c.params.omega0 = as_real(s); });
    add("model.lambda", "", "spin-field coupling lambda", [](RunConfig& c, const Source& s) { c.params.lambda = as_real(s); });

    add("drive.amplitude", "0", "semiclassical drive amplitude A", [](RunConfig& c, const Source& s) { c.drive.amplitude = as_real(s); });
    add("drive.phase", "0", "semiclassical drive phase", [](RunConfig& c, const Source& s) { c.drive.phase = as_real(s); });

    add("state.alpha_re", "0", "coherent amplitude, real part", [](RunConfig& c, const Source& s) { c.alpha.real(as_real(s)); });
    add("state.alpha_im", "0", "coherent amplitude, imaginary part", [](RunConfig& c, const Source& s) { c.alpha.imag(as_real(s)); });
    add("state.spin", "up", "initial spin: up | down | plus | minus", [](RunConfig& c, const Source& s) { c.spin = s.value; });
    add("state.n0", "0", "initial displaced level (displaced model)", [](RunConfig& c, const Source& s) { c.n0 = as_int(s); });

    add("propagation.t_end", "10", "final time", [](RunConfig& c, const Source& s) { c.propagation.t_end = as_real(s); });
    add("propagation.dt", "0.01", "initial step", [](RunConfig& c, const Source& s) { c.propagation.dt_initial = as_real(s); });
    add("propagation.norm_tolerance", "1e-10", "allowed norm drift per run",
        [](RunConfig& c, const Source& s) { c.propagation.norm_tolerance = as_real(s); });
    add("propagation.max_step_halvings", "4", "step halvings before giving up",
        [](RunConfig& c, const Source& s) { c.propagation.max_step_halvings = as_int(s); });
    add("propagation.sample_interval", "0.1", "output grid spacing",
        [](RunConfig& c, const Source& s) { c.propagation.sample_interval = as_real(s); });

    add("series.p_max", "0", "harmonic cutoff, 0 = ceil(4A/omega0) + 25 + extra orders",
        [&pending](RunConfig&, const Source& s) { pending.p_max = as_int(s); });
    add("series.l_max", "200", "normal-ordering cutoff", [&pending](RunConfig&, const Source& s) { pending.l_max = as_int(s); });
    add("series.tail_tolerance", "1e-12", "dropped Bessel tail bound",
        [&pending](RunConfig&, const Source& s) { pending.tail_tolerance = as_real(s); });

    add("sweep.amplitude", "0.5", "fixed A = lambda |alpha|", [](RunConfig& c, const Source& s) { c.sweep.amplitude_fixed = as_real(s); });
    add("sweep.lambdas", "0.2, 0.1, 0.05, 0.025", "strictly decreasing lambda values",
        [](RunConfig& c, const Source& s) { c.sweep.lambda_sequence = as_list<double>(s); });
    add("sweep.max_n", "5", "probe levels n = 0..max_n", [&pending](RunConfig&, const Source& s) { pending.sweep_max_n = as_int(s); });
    add("sweep.max_k", "3", "photon orders k = 0..max_k", [&pending](RunConfig&, const Source& s) { pending.sweep_max_k = as_int(s); });
    add("sweep.time_samples", "16", "samples per field period",
        [&pending](RunConfig&, const Source& s) { pending.sweep_samples = as_int(s); });
    add("sweep.alpha_phase", "0", "arg alpha", [](RunConfig& c, const Source& s) { c.sweep.alpha_phase = as_real(s); });

    add("fock.amplitude", "0.5", "A = lambda sqrt(n)", [](RunConfig& c, const Source& s) { c.fock.amplitude = as_real(s); });
    add("fock.orders", "0, 1, 2", "photon orders k", [](RunConfig& c, const Source& s) { c.fock.orders = as_list<int>(s); });
    add("fock.levels", "10, 100, 1000", "increasing Fock levels n", [](RunConfig& c, const Source& s) { c.fock.levels = as_list<int>(s); });

    add("transform.amplitude", "0.3", "fixed A", [](RunConfig& c, const Source& s) { c.transform.amplitude = as_real(s); });
    add("transform.lambdas", "0.1, 0.05, 0.025", "strictly decreasing lambda values",
        [](RunConfig& c, const Source& s) { c.transform.lambda_sequence = as_list<double>(s); });
    add("transform.time_samples", "8", "samples per field period",
        [&pending](RunConfig&, const Source& s) { pending.transform_samples = as_int(s); });
    add("transform.alpha_phase", "0", "arg alpha", [](RunConfig& c, const Source& s) { c.transform.alpha_phase = as_real(s); });
    add("transform.probe_levels", "10", "displaced levels 0..probe_levels compared",
        [](RunConfig& c, const Source& s) { c.transform.probe_levels = as_int(s); });

    add("diagram.amplitudes", "0, 0.25, 0.5", "amplitudes A", [](RunConfig& c, const Source& s) { c.diagram.amplitudes = as_list<double>(s); });
    add("diagram.lambda_small", "0.1", "lambda of the first path; the second uses half",
        [](RunConfig& c, const Source& s) { c.diagram.lambda_small = as_real(s); });
    add("diagram.times", "0, 0.7, 2.1, 4", "evaluation times", [](RunConfig& c, const Source& s) { c.diagram.times = as_list<double>(s); });
    add("diagram.level", "0", "displaced level", [](RunConfig& c, const Source& s) { c.diagram.level = as_int(s); });

    add("evolve.model", "quantum", "quantum | semiclassical | displaced", [](RunConfig& c, const Source& s) {
        if (s.value == "quantum") c.evolve.model = EvolveModel::quantum;
        else if (s.value == "semiclassical") c.evolve.model = EvolveModel::semiclassical;
        else if (s.value == "displaced") c.evolve.model = EvolveModel::displaced;
        else bad_value(s, "expected quantum, semiclassical or displaced");
    });
    add("evolve.levels", "12", "displaced levels kept (displaced model)",
        [](RunConfig& c, const Source& s) { c.evolve.levels = as_int(s); });
    add("evolve.amplitude_columns", "0", "leading amplitudes written to the CSV",
        [](RunConfig& c, const Source& s) { c.evolve.amplitude_columns = as_int(s); });

    add("compare.amplitude", "0.25", "fixed A = lambda |alpha|", [](RunConfig& c, const Source& s) { c.compare.amplitude = as_real(s); });
    add("compare.lambdas", "0.1, 0.05, 0.025", "strictly decreasing lambda values",
        [](RunConfig& c, const Source& s) { c.compare.lambdas = as_list<double>(s); });
    add("compare.alpha_phase", "0", "arg alpha", [](RunConfig& c, const Source& s) { c.compare.alpha_phase = as_real(s); });

    add("identities.samples", "40", "random samples per identity", [](RunConfig& c, const Source& s) { c.identity_samples = as_int(s); });

    add("output.dir", "rabilab-out", "output directory", [](RunConfig& c, const Source& s) { c.output_dir = s.value; });
    add("run.seed", "1", "seed for randomized sampling", [](RunConfig& c, const Source& s) {
        if (s.value.empty() || s.value[0] == '-') bad_value(s, "expected a non-negative integer");
        c.seed = parse_number<std::uint64_t>(s, s.value);
    });
    add("run.tolerance_scale", "1", "multiplier on every check tolerance",
        [](RunConfig& c, const Source& s) { c.tolerance_scale = as_real(s); });
    return f;
}

void require(bool ok, const char* invariant) {
    if (!ok) throw ValidationError(invariant);
}

bool strictly_decreasing_positive(const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) return false;
        if (i > 0 && !(v[i] < v[i - 1])) return false;
    }
    return true;
}

}  // namespace

ParseError::ParseError(const std::string& message, int line, std::string key)
    : Error(message), line_(line), key_(std::move(key)) {}

std::string command_name(Command c) {
    switch (c) {
        case Command::check_identities: return "check-identities";
        case Command::sweep: return "sweep";
        case Command::fock_limit: return "fock-limit";
        case Command::transform_limit: return "transform-limit";
        case Command::evolve: return "evolve";
        case Command::compare: return "compare";
        case Command::diagram: return "diagram";
    }
    return "";
}

Command command_from_name(const std::string& name) {
    for (Command c : {Command::check_identities, Command::sweep, Command::fock_limit, Command::transform_limit,
                      Command::evolve, Command::compare, Command::diagram}) {
        if (command_name(c) == name) return c;
    }
    throw ParseError("unknown command '" + name + "'", 0, "command");
}

Eigen::Vector2cd RunConfig::spin_state() const {
    const double r = 1.0 / std::sqrt(2.0);
    if (spin == "up") return {1.0, 0.0};
    if (spin == "down") return {0.0, 1.0};
    if (spin == "plus") return {r, r};
    if (spin == "minus") return {r, -r};
    throw ValidationError("state.spin in {up, down, plus, minus}");
}

void RunConfig::validate() const {
    require(params.omega0 > 0.0, "omega0 > 0");
    require(params.omega >= 0.0, "omega >= 0");
    require(params.lambda >= 0.0, "lambda >= 0");
    require(drive.amplitude >= 0.0, "drive.amplitude >= 0");
    require(spin == "up" || spin == "down" || spin == "plus" || spin == "minus", "state.spin in {up, down, plus, minus}");
    require(n0 >= 0, "state.n0 >= 0");
    try {
        propagation.validate();
    } catch (const PreconditionError& e) {
        throw ValidationError(e.what());
    }
    require(sweep.amplitude_fixed >= 0.0, "sweep.amplitude >= 0");
    require(strictly_decreasing_positive(sweep.lambda_sequence), "sweep.lambdas positive and strictly decreasing");
    require(sweep.time_samples.size() >= 1, "sweep.time_samples >= 1");
    require(!sweep.probe_levels.empty(), "sweep.max_n >= 0 and sweep.max_k >= 0");
    require(sweep.cutoffs.l_max >= 0 && sweep.cutoffs.tail_tolerance > 0.0, "series.l_max >= 0 and series.tail_tolerance > 0");
    require(fock.amplitude >= 0.0, "fock.amplitude >= 0");
    for (int k : fock.orders) require(k >= 0, "fock.orders >= 0");
    for (std::size_t i = 0; i < fock.levels.size(); ++i) {
        require(fock.levels[i] >= 1 && (i == 0 || fock.levels[i] > fock.levels[i - 1]), "fock.levels >= 1 and increasing");
    }
    require(transform.amplitude > 0.0, "transform.amplitude > 0");
    require(strictly_decreasing_positive(transform.lambda_sequence), "transform.lambdas positive and strictly decreasing");
    require(!transform.time_samples.empty(), "transform.time_samples >= 1");
    require(transform.probe_levels >= 0, "transform.probe_levels >= 0");
    for (double a : diagram.amplitudes) require(a >= 0.0, "diagram.amplitudes >= 0");
    require(diagram.lambda_small > 0.0, "diagram.lambda_small > 0");
    require(diagram.level >= 0, "diagram.level >= 0");
    require(evolve.levels >= 1, "evolve.levels >= 1");
    require(evolve.amplitude_columns >= 0, "evolve.amplitude_columns >= 0");
    if (command == Command::evolve && evolve.model == EvolveModel::displaced) {
        require(std::abs(alpha) > 0.0, "alpha != 0 for the displaced model");
        require(n0 < evolve.levels, "state.n0 < evolve.levels");
    }
    require(compare.amplitude >= 0.0, "compare.amplitude >= 0");
    require(strictly_decreasing_positive(compare.lambdas), "compare.lambdas positive and strictly decreasing");
    require(identity_samples >= 1, "identities.samples >= 1");
    require(tolerance_scale > 0.0, "tolerance_scale > 0");
    require(!output_dir.empty(), "output.dir not empty");
}

std::vector<SchemaEntry> config_schema() {
    Pending pending;
    std::vector<SchemaEntry> out;
    for (const auto& f : fields(pending)) out.push_back(f.doc);
    return out;
}

RunConfig parse_config(std::istream& in, const std::vector<std::pair<std::string, std::string>>& overrides) {
    Pending pending;
    const auto schema = fields(pending);
    std::map<std::string, Source> given;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value'", line_no, "");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const bool known =
            std::any_of(schema.begin(), schema.end(), [&](const Field& f) { return f.doc.key == key; });
        if (!known) throw ParseError("line " + std::to_string(line_no) + ": unknown key '" + key + "'", line_no, key);
        if (given.count(key)) {
            throw ParseError("line " + std::to_string(line_no) + ": repeated key '" + key + "'", line_no, key);
        }
        given[key] = {value, line_no, key};
    }
    for (const auto& [key, value] : overrides) given[key] = {value, 0, key};

    RunConfig c;
    for (const auto& f : schema) {
        auto it = given.find(f.doc.key);
        if (it == given.end()) {
            if (f.doc.default_value.empty()) {
                throw ParseError("missing required key '" + f.doc.key + "'", 0, f.doc.key);
            }
            it = given.emplace(f.doc.key, Source{f.doc.default_value, 0, f.doc.key}).first;
        }
        f.apply(c, it->second);
        c.resolved.emplace_back(f.doc.key, it->second.value);
    }

    if (!(c.params.omega0 > 0.0)) throw ValidationError("omega0 > 0");
    require(pending.sweep_samples >= 1, "sweep.time_samples >= 1");
    require(pending.transform_samples >= 1, "transform.time_samples >= 1");
    require(pending.sweep_max_n >= 0 && pending.sweep_max_k >= 0, "sweep.max_n >= 0 and sweep.max_k >= 0");
    require(pending.p_max >= 0, "series.p_max >= 0");
    c.sweep.time_samples = period_grid(pending.sweep_samples, c.params.omega0);
    c.transform.time_samples = period_grid(pending.transform_samples, c.params.omega0);
    for (int n = 0; n <= pending.sweep_max_n; ++n) {
        for (int k = 0; k <= pending.sweep_max_k; ++k) c.sweep.probe_levels.push_back({n, k});
    }
    const double z = 4.0 * c.sweep.amplitude_fixed / c.params.omega0;
    c.sweep.cutoffs = ham::SeriesCutoffs::for_argument(z, pending.sweep_max_k + pending.sweep_max_n);
    if (pending.p_max > 0) c.sweep.cutoffs.p_max = pending.p_max;
    c.sweep.cutoffs.l_max = pending.l_max;
    c.sweep.cutoffs.tail_tolerance = pending.tail_tolerance;
    c.validate();
    return c;
}

RunConfig parse_config_file(const std::filesystem::path& path,
                            const std::vector<std::pair<std::string, std::string>>& overrides) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path.string() + "'", 0, "");
    return parse_config(in, overrides);
}

}  // namespace rabilab::cli
