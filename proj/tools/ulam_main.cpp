// ulam -- command-line front end for the transfer-operator pipeline:
// matrix assembly, stationary solve, delta sweeps, monotonicity property
// runs, the counterexample experiment and map verification.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ulam/io.hpp"
#include "ulam/rng.hpp"

namespace {

using nlohmann::json;

int g_log_level = 0;

void log_info(const std::string& msg) {
    if (g_log_level > 0) std::cerr << "[ulam] " << msg << '\n';
}

unsigned env_threads() {
    if (const char* v = std::getenv("ULAM_THREADS")) {
        long t = std::strtol(v, nullptr, 10);
        if (t >= 1) return static_cast<unsigned>(t);
    }
    return 1;
}

struct MapSpec {
    std::string name = "mp";
    double alpha = 0.5;
    std::string file;

    ulam::IntervalMap make() const {
        if (!file.empty()) {
            std::ifstream in(file);
            if (!in) throw std::invalid_argument("cannot open map file '" + file + "'");
            return ulam::io::map_from_json(json::parse(in));
        }
        return ulam::io::make_catalog_map(name, alpha);
    }

    json echo() const {
        json j{{"map", name}};
        if (name == "mp") j["alpha"] = alpha;
        if (!file.empty()) j["map_file"] = file;
        return j;
    }
};

struct PartitionSpec {
    std::size_t cells = 1024;
    std::string kind = "uniform";
    double K = 2.0;
    std::uint64_t seed = 0;

    ulam::Partition make() const {
        if (kind == "uniform") return ulam::uniform_partition(cells);
        if (kind == "quasi") return ulam::quasi_uniform_partition(cells, K, seed);
        throw std::invalid_argument("unknown partition kind '" + kind + "'");
    }

    json echo() const {
        json j{{"cells", cells}, {"partition", kind}};
        if (kind == "quasi") {
            j["K"] = K;
            j["seed"] = seed;
        }
        return j;
    }
};

void add_map_flags(CLI::App* cmd, MapSpec& spec) {
    cmd->add_option("--map", spec.name, "catalog map: mp | counterexample");
    cmd->add_option("--alpha", spec.alpha, "neutral-fixed-point exponent for --map mp");
    cmd->add_option("--map-file", spec.file, "JSON description of a piecewise map");
}

void add_partition_flags(CLI::App* cmd, PartitionSpec& spec) {
    cmd->add_option("--cells", spec.cells, "number of partition cells");
    cmd->add_option("--partition", spec.kind, "uniform | quasi");
    cmd->add_option("--K", spec.K, "cell-length ratio bound for quasi partitions");
    cmd->add_option("--seed", spec.seed, "seed for quasi partitions");
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

void write_output(const std::string& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

ulam::SweepRecord pipeline_record(const MapSpec& map_spec, const PartitionSpec& part_spec,
                                  double z, const ulam::StationaryOptions& solve) {
    if (map_spec.name != "mp" || !map_spec.file.empty())
        throw std::invalid_argument(
            "pipeline records carry neutral-fixed-point statistics; only --map mp is supported "
            "(use build/stationary for other maps)");
    ulam::SweepConfig cfg;
    cfg.alpha = map_spec.alpha;
    cfg.cell_counts = {part_spec.cells};
    cfg.kind = part_spec.kind == "quasi" ? ulam::PartitionKind::quasi : ulam::PartitionKind::uniform;
    cfg.K = part_spec.K;
    cfg.seed = part_spec.seed;
    cfg.z = z;
    cfg.solve = solve;
    return ulam::run_sweep(cfg).front();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-rank (Ulam) transfer-operator toolkit for interval maps"};
    app.require_subcommand(1);
    app.fallthrough(); // lets --log appear after the subcommand
    app.add_flag("--log", g_log_level, "increase diagnostic verbosity on stderr");

    ulam::StationaryOptions solve;
    std::string method = "auto";
    auto add_solver_flags = [&](CLI::App* cmd) {
        cmd->add_option("--tol", solve.tol, "stationarity tolerance ||pi P - pi||_1");
        cmd->add_option("--max-iter", solve.max_iter, "power-iteration budget");
        cmd->add_flag("--cesaro", solve.cesaro, "average the iterates");
        cmd->add_option("--method", method, "auto | power | direct");
    };
    auto resolve_method = [&]() {
        if (method == "auto") solve.method = ulam::StationaryOptions::Method::automatic;
        else if (method == "power") solve.method = ulam::StationaryOptions::Method::power;
        else if (method == "direct") solve.method = ulam::StationaryOptions::Method::direct;
        else throw CLI::ValidationError("--method must be auto, power or direct");
    };

    // build
    auto* build = app.add_subcommand("build", "assemble the transition matrix");
    MapSpec build_map;
    PartitionSpec build_part;
    std::string build_out;
    add_map_flags(build, build_map);
    add_partition_flags(build, build_part);
    build->add_option("--out", build_out, ".json or coordinate text output")->required();

    // stationary
    auto* stat = app.add_subcommand("stationary", "stationary distribution of a saved matrix");
    std::string stat_in, stat_out;
    int stat_nmax = 64;
    stat->add_option("--in", stat_in, "matrix JSON")->required();
    stat->add_option("--out", stat_out, "output JSON")->required();
    stat->add_option("--n-delta-max", stat_nmax, "highest power probed for entrywise positivity");
    add_solver_flags(stat);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "delta sweep over resolutions");
    MapSpec sweep_map;
    std::vector<std::size_t> sweep_cells;
    std::string sweep_kind = "uniform", sweep_out;
    double sweep_K = 2.0, sweep_z = 0.1;
    std::uint64_t sweep_seed = 0;
    sweep->add_option("--alpha", sweep_map.alpha, "neutral-fixed-point exponent")->required();
    sweep->add_option("--cells", sweep_cells, "comma-separated cell counts")
        ->required()
        ->delimiter(',');
    sweep->add_option("--z", sweep_z, "tail threshold for mass of [z,1]");
    sweep->add_option("--partition", sweep_kind, "uniform | quasi");
    sweep->add_option("--K", sweep_K, "ratio bound for quasi partitions");
    sweep->add_option("--seed", sweep_seed, "seed for quasi partitions");
    sweep->add_option("--out", sweep_out, "CSV output")->required();
    add_solver_flags(sweep);

    // check-monotone
    auto* mono = app.add_subcommand("check-monotone",
                                    "randomized monotone-measure property trials (JSON lines)");
    MapSpec mono_map;
    std::size_t mono_trials = 100, mono_cells = 1024;
    std::uint64_t mono_seed = 1;
    std::string mono_out;
    add_map_flags(mono, mono_map);
    mono->add_option("--trials", mono_trials, "number of trials");
    mono->add_option("--seed", mono_seed, "base seed");
    mono->add_option("--cells", mono_cells, "output partition resolution");
    mono->add_option("--out", mono_out, "JSON-lines output (default stdout)");

    // counterexample
    auto* ce = app.add_subcommand("counterexample",
                                  "stationary mass near 1/2 for the counterexample map");
    std::vector<std::size_t> ce_cells{12, 60, 120, 240, 480};
    double ce_window = 1.0 / 24.0;
    bool ce_unaligned = false;
    std::string ce_out;
    ce->add_option("--cells", ce_cells, "comma-separated cell counts")->delimiter(',');
    ce->add_option("--window", ce_window, "half-width of the window around 1/2");
    ce->add_flag("--allow-unaligned", ce_unaligned, "permit cell counts not divisible by 12");
    ce->add_option("--out", ce_out, "CSV output")->required();

    // verify-family
    auto* family = app.add_subcommand("verify-family",
                                      "piecewise-convexity / origin-in-image / expansion checks");
    MapSpec fam_map;
    std::size_t fam_samples = 1025;
    bool fam_expanding = false;
    double fam_C = 1.0;
    std::optional<double> fam_exponent;
    std::string fam_out;
    add_map_flags(family, fam_map);
    family->add_option("--samples", fam_samples, "grid points per branch");
    family->add_flag("--expanding", fam_expanding, "also check the expanding-map conditions");
    family->add_option("--C", fam_C, "expected scale of the near-origin form");
    family->add_option("--exponent", fam_exponent, "expected exponent (defaults to map alpha)");
    family->add_option("--out", fam_out, "report JSON (default stdout)");

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "build + solve + one sweep record");
    MapSpec pipe_map;
    PartitionSpec pipe_part;
    double pipe_z = 0.1;
    std::string pipe_out;
    add_map_flags(pipe, pipe_map);
    add_partition_flags(pipe, pipe_part);
    pipe->add_option("--z", pipe_z, "tail threshold");
    pipe->add_option("--out", pipe_out, "output JSON")->required();
    add_solver_flags(pipe);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        resolve_method();

        if (*build) {
            auto map = build_map.make();
            auto part = build_part.make();
            auto matrix = ulam::build_matrix(map, part);
            log_info("max pre-normalization row residual: " +
                     std::to_string(matrix.max_row_residual));
            json config{{"subcommand", "build"}};
            config.update(build_map.echo());
            config.update(build_part.echo());
            if (ends_with(build_out, ".json")) {
                json out = ulam::io::matrix_to_json(matrix);
                out["config"] = config;
                write_output(build_out, out);
            } else {
                std::ostringstream text;
                text << "# config: " << config.dump() << '\n';
                ulam::io::matrix_to_coo(matrix, text);
                write_text_file(build_out, text.str());
            }
            return 0;
        }

        if (*stat) {
            std::ifstream in(stat_in);
            if (!in) throw std::invalid_argument("cannot open '" + stat_in + "'");
            auto matrix = ulam::io::matrix_from_json(json::parse(in));
            auto sol = ulam::stationary_distribution(matrix, solve);
            ulam::ErgodicityOptions eopt;
            eopt.n_max = stat_nmax;
            auto erg = ulam::check_unique_ergodicity(matrix, eopt);
            sol.unique = erg.unique;
            sol.n_positive_power = erg.n_positive_power;
            log_info("method=" + sol.method + " iterations=" + std::to_string(sol.iterations));
            json out = ulam::io::stationary_to_json(sol);
            out["config"] = json{{"subcommand", "stationary"},
                                 {"in", stat_in},
                                 {"tol", solve.tol},
                                 {"max_iter", solve.max_iter},
                                 {"cesaro", solve.cesaro},
                                 {"method", method},
                                 {"n_delta_max", stat_nmax}};
            write_output(stat_out, out);
            return sol.converged ? 0 : 2;
        }

        if (*sweep) {
            ulam::SweepConfig cfg;
            cfg.alpha = sweep_map.alpha;
            cfg.cell_counts = sweep_cells;
            cfg.kind =
                sweep_kind == "quasi" ? ulam::PartitionKind::quasi : ulam::PartitionKind::uniform;
            cfg.K = sweep_K;
            cfg.seed = sweep_seed;
            cfg.z = sweep_z;
            cfg.solve = solve;
            cfg.threads = env_threads();
            auto records = ulam::run_sweep(cfg);
            json config{{"subcommand", "sweep"}, {"alpha", cfg.alpha},
                        {"cells", cfg.cell_counts}, {"partition", sweep_kind},
                        {"K", cfg.K},              {"seed", cfg.seed},
                        {"z", cfg.z},              {"tol", solve.tol},
                        {"max_iter", solve.max_iter}, {"cesaro", solve.cesaro},
                        {"method", method}};
            std::ostringstream text;
            ulam::io::write_sweep_csv(text, config, records);
            write_text_file(sweep_out, text.str());
            for (const auto& r : records)
                if (!r.ok) {
                    log_info("record n=" + std::to_string(r.n_cells) + " failed: " + r.error);
                    return 2;
                }
            return 0;
        }

        if (*mono) {
            auto map = mono_map.make();
            std::ofstream file_out;
            if (!mono_out.empty()) {
                file_out.open(mono_out, std::ios::binary);
                if (!file_out) throw std::runtime_error("cannot write '" + mono_out + "'");
            }
            std::ostream& out = mono_out.empty() ? std::cout : file_out;
            bool all_pass = true;

            std::mt19937_64 gen(mono_seed);
            for (std::size_t trial = 0; trial < mono_trials; ++trial) {
                const std::uint64_t seed = gen();
                auto mu = ulam::random_monotonic(seed, 16 + seed % 97, 0.3);

                // ordered interval pair with positive lengths inside [0,1]
                double a_lo = ulam::uniform_in(gen, 0.0, 0.8);
                double a_hi = ulam::uniform_in(gen, a_lo + 0.05, 1.0);
                double b_lo = ulam::uniform_in(gen, a_lo, a_hi);
                double b_hi =
                    ulam::uniform_in(gen, std::min(std::max(a_hi, b_lo + 0.05), 1.0), 1.0);
                ulam::IntervalPair pair{{a_lo, a_hi}, {b_lo, b_hi}};
                bool key_ok = ulam::check_key_inequality(mu, pair);

                auto target = ulam::quasi_uniform_partition(32 + seed % 257, 3.0, seed);
                auto proj_check = ulam::is_monotonic(ulam::project(mu, target), 1e-12);

                auto pushed = ulam::pushforward(map, mu, ulam::uniform_partition(mono_cells));
                auto push_check = ulam::is_monotonic(pushed, 1e-10);

                json line{{"trial", trial},
                          {"seed", seed},
                          {"key_inequality", key_ok},
                          {"project_monotone", proj_check.monotonic},
                          {"pushforward_monotone", push_check.monotonic}};
                if (!key_ok)
                    line["witness_pair"] = {{"A", {pair.A.lo, pair.A.hi}},
                                            {"B", {pair.B.lo, pair.B.hi}},
                                            {"avg_A", ulam::avg_density(mu, pair.A)},
                                            {"avg_B", ulam::avg_density(mu, pair.B)}};
                if (!proj_check.monotonic && proj_check.first_violation)
                    line["witness_project_cell"] = *proj_check.first_violation + 1;
                if (!push_check.monotonic && push_check.first_violation)
                    line["witness_pushforward_cell"] = *push_check.first_violation + 1;
                out << line.dump() << '\n';
                all_pass = all_pass && key_ok && proj_check.monotonic && push_check.monotonic;
            }
            return all_pass ? 0 : 2;
        }

        if (*ce) {
            auto records = ulam::run_counterexample(ce_cells, ce_window, ce_unaligned);
            json config{{"subcommand", "counterexample"},
                        {"cells", ce_cells},
                        {"window", ce_window},
                        {"allow_unaligned", ce_unaligned}};
            std::ostringstream text;
            ulam::io::write_counterexample_csv(text, config, records);
            write_text_file(ce_out, text.str());
            return 0;
        }

        if (*family) {
            auto map = fam_map.make();
            ulam::FamilyReport rep;
            if (fam_expanding) {
                double exponent = fam_exponent ? *fam_exponent
                                               : (map.params.count("alpha") ? map.params.at("alpha")
                                                                            : 0.0);
                rep = ulam::verify_expanding_conditions(map, exponent, fam_C, fam_samples);
            } else {
                rep = ulam::verify_family(map, fam_samples);
            }
            json out = ulam::io::family_report_to_json(rep);
            out["config"] = json{{"subcommand", "verify-family"},
                                 {"samples", fam_samples},
                                 {"expanding", fam_expanding}};
            out["config"].update(fam_map.echo());
            if (fam_out.empty())
                std::cout << out.dump(2) << '\n';
            else
                write_output(fam_out, out);
            bool ok = fam_expanding ? rep.expanding_ok() : rep.family_ok();
            return ok ? 0 : 2;
        }

        if (*pipe) {
            auto rec = pipeline_record(pipe_map, pipe_part, pipe_z, solve);
            json config{{"subcommand", "pipeline"}, {"z", pipe_z},       {"tol", solve.tol},
                        {"max_iter", solve.max_iter}, {"cesaro", solve.cesaro}, {"method", method}};
            config.update(pipe_map.echo());
            config.update(pipe_part.echo());
            json out{{"config", config}, {"record", ulam::io::sweep_record_to_json(rec)}};
            write_output(pipe_out, out);
            return rec.ok ? 0 : 2;
        }
    } catch (const std::invalid_argument& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    }
    return 1;
}
