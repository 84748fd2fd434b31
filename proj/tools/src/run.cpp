#include "flowshoot/app/run.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "flowshoot/app/output.hpp"

namespace flowshoot::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool admissible(const DiagnosticsReport& r) {
    return r.regularity_margin > 0.0 && r.feasibility.start_feasible && r.feasibility.target_feasible;
}

void print_admission(const DiagnosticsReport& r, std::ostream& out) {
    out << "regularity margin      " << format_real(r.regularity_margin) << '\n'
        << "interior speed margin  " << format_real(r.feasibility.interior_speed_margin) << '\n'
        << "start feasible         " << (r.feasibility.start_feasible ? "yes" : "no") << '\n'
        << "target feasible        " << (r.feasibility.target_feasible ? "yes" : "no") << '\n';
}

/// Files written during a run; removed again unless the run commits.
class OutputTransaction {
public:
    explicit OutputTransaction(fs::path dir) : dir_(std::move(dir)) {}
    OutputTransaction(const OutputTransaction&) = delete;
    OutputTransaction& operator=(const OutputTransaction&) = delete;

    ~OutputTransaction() {
        if (committed_) return;
        std::error_code ec;
        for (const fs::path& p : written_) fs::remove(p, ec);
        if (created_dir_) fs::remove(dir_, ec);
    }

    void open_dir() {
        std::error_code ec;
        if (!fs::exists(dir_, ec)) {
            if (!fs::create_directories(dir_, ec) || ec)
                throw std::runtime_error("cannot create output directory '" + dir_.string() + "'");
            created_dir_ = true;
        }
        if (!fs::is_directory(dir_, ec)) throw std::runtime_error("'" + dir_.string() + "' is not a directory");
    }

    /// Trajectories of an earlier run would otherwise outlive a smaller field.
    void remove_stale_trajectories() {
        std::error_code ec;
        std::vector<fs::path> stale;
        for (const auto& entry : fs::directory_iterator(dir_, ec)) {
            const std::string name = entry.path().filename().string();
            if (name.rfind("extremal_", 0) == 0 && entry.path().extension() == ".csv") stale.push_back(entry.path());
        }
        for (const fs::path& p : stale) fs::remove(p, ec);
    }

    void write(const std::string& name, const std::string& content) {
        const fs::path p = dir_ / name;
        written_.push_back(p);
        std::ofstream f(p, std::ios::binary);
        f << content;
        f.close();
        if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
    }

    void commit() { committed_ = true; }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
    bool created_dir_ = false;
    bool committed_ = false;
};

}  // namespace

fs::path resolve_output_dir(const std::optional<fs::path>& flag, const std::string& configured) {
    if (flag) return *flag;
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
    return configured;
}

int run_solve(const fs::path& scenario_path, const SolveOptions& opt, std::ostream& out, std::ostream& err) {
    ScenarioConfig cfg;
    Scenario sc;
    try {
        cfg = parse_scenario(scenario_path);
        sc = to_scenario(cfg);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    sc.search.threads = opt.threads;

    DiagnosticsReport report = admission_report(sc);
    if (report.feasibility.interior_speed_margin < 0.0)
        err << "warning: flow speed reaches " << format_real(1.0 - report.feasibility.interior_speed_margin)
            << " inside the feasible set\n";
    if (!admissible(report)) {
        if (!opt.force) {
            err << "error: scenario fails the admission checks (use --force to solve anyway)\n";
            print_admission(report, err);
            return kExitFailure;
        }
        err << "warning: admission checks failed; solving anyway\n";
    }

    const fs::path dir = resolve_output_dir(opt.out_dir, cfg.output_dir);
    OutputTransaction tx(dir);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        tx.open_dir();
        ExtremalField field = solve(sc);
        for (const Extremal& e : field.extremals) report.extremals.push_back(verify_extremal(sc, e));
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        tx.remove_stale_trajectories();

        for (size_t k = 0; k < field.extremals.size(); ++k) {
            std::ostringstream csv;
            write_trajectory_csv(csv, field.extremals[k]);
            tx.write(trajectory_file_name(k + 1), csv.str());
        }
        tx.write("summary.json", summary_json(cfg, sc, field, report, wall).dump(2) + "\n");
        tx.write("diagnostics.json", diagnostics_json(report).dump(2) + "\n");
        tx.commit();

        for (size_t k = 0; k < field.extremals.size(); ++k) {
            const Extremal& e = field.extremals[k];
            out << (k == field.optimal ? "* " : "  ") << "extremal " << k + 1 << "  " << to_string(e.classification)
                << "  T = " << format_real(e.T) << '\n';
        }
        out << "wrote " << field.extremals.size() << " trajectories to " << dir.string() << '\n';
        return kExitOk;
    } catch (const EmptyField& e) {
        err << "error: " << e.what() << '\n';
        return kExitEmptyField;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

int run_check(const fs::path& scenario_path, std::ostream& out, std::ostream& err) {
    try {
        const ScenarioConfig cfg = parse_scenario(scenario_path);
        const Scenario sc = to_scenario(cfg);
        const DiagnosticsReport report = admission_report(sc);
        print_admission(report, out);
        out << "horizon                " << format_real(sc.integration.t_max) << '\n';
        return admissible(report) ? kExitOk : kExitFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

int run_verify(const fs::path& summary_path, const std::vector<fs::path>& csvs, std::ostream& out, std::ostream& err) {
    json summary;
    Scenario sc;
    try {
        std::ifstream in(summary_path);
        if (!in) throw std::runtime_error("cannot read '" + summary_path.string() + "'");
        summary = json::parse(in);
        ScenarioConfig cfg = scenario_config_from_json(summary.at("scenario"));
        cfg.output_dir = ".";
        sc = to_scenario(cfg);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }

    bool all_ok = true;
    for (const fs::path& p : csvs) {
        try {
            std::ifstream in(p);
            if (!in) throw std::runtime_error("cannot read '" + p.string() + "'");
            const Extremal e = read_trajectory_csv(in);
            const ExtremalDiagnostics d = verify_extremal(sc, e);
            std::vector<std::string> problems = threshold_violations(d);

            // Compare with the diagnostics recorded when the file was written.
            const std::string name = p.filename().string();
            const json* stored = nullptr;
            for (const json& x : summary.at("extremals"))
                if (x.at("file").get<std::string>() == name) {
                    const size_t id = x.at("id").get<size_t>();
                    for (const json& dj : summary.at("diagnostics").at("extremals"))
                        if (dj.at("id").get<size_t>() == id) stored = &dj;
                }
            if (stored) {
                const json now = extremal_diagnostics_json(d);
                for (const char* key : {"hamiltonian_mean", "hamiltonian_drift", "nontriviality_min",
                                        "control_deviation", "constraint_max", "endpoint_miss"}) {
                    const double a = now.at(key).get<double>(), b = stored->at(key).get<double>();
                    if (!(std::abs(a - b) <= 1e-12)) problems.push_back(std::string("differs from summary: ") + key);
                }
            } else {
                problems.emplace_back("not listed in summary");
            }

            out << name << ": T = " << format_real(e.T) << ", lambda = " << format_real(d.hamiltonian_mean)
                << ", drift = " << format_real(d.hamiltonian_drift);
            if (problems.empty()) {
                out << ", ok\n";
            } else {
                all_ok = false;
                out << ", FAILED:";
                for (const auto& pr : problems) out << ' ' << pr;
                out << '\n';
            }
        } catch (const std::exception& e) {
            all_ok = false;
            err << "error: " << p.string() << ": " << e.what() << '\n';
        }
    }
    return all_ok ? kExitOk : kExitFailure;
}

}  // namespace flowshoot::app
