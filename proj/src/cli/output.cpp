#include "rabilab/cli/output.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace rabilab::cli {

std::string version() { return RABILAB_VERSION; }

Report::Report(const RunConfig& config) : config_(config) {}

void Report::add_threshold(const std::string& name, double residual, double tolerance, const std::string& detail) {
    checks_.push_back({name, residual <= tolerance, residual, tolerance, detail});
}

void Report::add_flag(const std::string& name, bool passed, double value, const std::string& detail) {
    checks_.push_back({name, passed, value, 0.0, detail});
}

void Report::add_residual(const std::string& name, double value) { residuals_.emplace_back(name, value); }

void Report::add_file(const std::filesystem::path& file) { files_.push_back(file.filename().string()); }

bool Report::all_passed() const { return first_failure() == nullptr; }

const Check* Report::first_failure() const {
    for (const auto& c : checks_) {
        if (!c.passed) return &c;
    }
    return nullptr;
}

namespace {

nlohmann::ordered_json number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

}  // namespace

nlohmann::ordered_json Report::to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = "rabilab";
    j["version"] = version();
    j["command"] = command_name(config_.command);
    j["seed"] = config_.seed;
    j["tolerance_scale"] = config_.tolerance_scale;
    nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
    for (const auto& [k, v] : config_.resolved) inputs[k] = v;
    j["inputs"] = inputs;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : checks_) {
        nlohmann::ordered_json e;
        e["name"] = c.name;
        e["passed"] = c.passed;
        e["residual"] = number(c.residual);
        e["tolerance"] = number(c.tolerance);
        e["detail"] = c.detail;
        checks.push_back(e);
    }
    j["checks"] = checks;
    nlohmann::ordered_json residuals = nlohmann::ordered_json::object();
    for (const auto& [k, v] : residuals_) residuals[k] = number(v);
    j["residuals"] = residuals;
    j["files"] = files_;
    j["passed"] = all_passed();
    return j;
}

csv::HeaderLines run_header(const RunConfig& config, const csv::HeaderLines& extra) {
    csv::HeaderLines h{{"tool", "rabilab"},
                       {"version", version()},
                       {"command", command_name(config.command)},
                       {"seed", std::to_string(config.seed)},
                       {"tolerance_scale", csv::format_real(config.tolerance_scale)}};
    for (const auto& kv : config.resolved) {
        if (kv.first != "command") h.push_back(kv);
    }
    h.insert(h.end(), extra.begin(), extra.end());
    return h;
}

std::filesystem::path write_file(const std::filesystem::path& dir, const std::string& name, const std::string& text) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.flush();
    if (!out) throw ValidationError("output directory writable: cannot write " + path.string());
    return path;
}

std::string plot_script(const std::string& command, const std::vector<std::string>& csv_files, bool log_axes) {
    std::ostringstream s;
    s << "#!/usr/bin/env python3\n"
      << "# Plot template for the '" << command << "' output.  Edit freely.\n"
      << "import csv\n"
      << "import sys\n"
      << "from pathlib import Path\n\n"
      << "import matplotlib.pyplot as plt\n\n"
      << "FILES = [";
    for (std::size_t i = 0; i < csv_files.size(); ++i) s << (i ? ", " : "") << "\"" << csv_files[i] << "\"";
    s << "]\n"
      << "LOG_AXES = " << (log_axes ? "True" : "False") << "\n\n\n"
      << "def read(path):\n"
      << "    with open(path, newline=\"\") as f:\n"
      << "        rows = list(csv.reader(line for line in f if not line.startswith(\"#\")))\n"
      << "    header, body = rows[0], rows[1:]\n"
      << "    return header, body\n\n\n"
      << "def main():\n"
      << "    here = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent\n"
      << "    for name in FILES:\n"
      << "        header, body = read(here / name)\n"
      << "        fig, ax = plt.subplots()\n"
      << "        x = [float(r[0]) for r in body]\n"
      << "        for col in range(1, len(header)):\n"
      << "            try:\n"
      << "                y = [float(r[col]) for r in body]\n"
      << "            except ValueError:\n"
      << "                continue\n"
      << "            ax.plot(x, y, marker=\"o\" if LOG_AXES else None, label=header[col])\n"
      << "        if LOG_AXES:\n"
      << "            ax.set_xscale(\"log\")\n"
      << "            ax.set_yscale(\"log\")\n"
      << "        ax.set_xlabel(header[0])\n"
      << "        ax.set_title(name)\n"
      << "        ax.legend()\n"
      << "        fig.savefig(here / (Path(name).stem + \".png\"), dpi=150)\n\n\n"
      << "if __name__ == \"__main__\":\n"
      << "    main()\n";
    return s.str();
}

}  // namespace rabilab::cli
