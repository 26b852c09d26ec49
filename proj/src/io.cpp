#include "ulam/io.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace ulam::io {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

json partition_to_json(const Partition& p) { return json(p.breakpoints()); }

Partition partition_from_json(const json& j) {
    return Partition(j.get<std::vector<double>>());
}

json measure_to_json(const StepMeasure& mu) {
    return json{{"atom0", mu.atom0},
                {"breakpoints", mu.support.breakpoints()},
                {"densities", mu.densities}};
}

StepMeasure measure_from_json(const json& j) {
    return make_step_measure(j.at("atom0").get<double>(),
                             Partition(j.at("breakpoints").get<std::vector<double>>()),
                             j.at("densities").get<std::vector<double>>());
}

json matrix_to_json(const UlamMatrix& m) {
    json rows = json::array();
    for (const auto& row : m.rows) {
        json r = json::array();
        for (const auto& e : row) r.push_back(json::array({e.col + 1, e.p}));
        rows.push_back(std::move(r));
    }
    return json{{"n", m.n},
                {"map", m.map_name},
                {"params", m.map_params},
                {"partition", m.partition.breakpoints()},
                {"max_row_residual", m.max_row_residual},
                {"rows", std::move(rows)}};
}

UlamMatrix matrix_from_json(const json& j) {
    UlamMatrix m{j.at("n").get<std::size_t>(),
                 {},
                 Partition(j.at("partition").get<std::vector<double>>()),
                 j.value("map", ""),
                 {},
                 j.value("max_row_residual", 0.0)};
    if (j.contains("params"))
        m.map_params = j.at("params").get<std::map<std::string, double>>();
    m.rows.resize(m.n);
    const auto& rows = j.at("rows");
    if (rows.size() != m.n) throw std::invalid_argument("matrix json: row count mismatch");
    for (std::size_t i = 0; i < m.n; ++i)
        for (const auto& e : rows[i]) {
            std::size_t col = e.at(0).get<std::size_t>();
            if (col < 1 || col > m.n) throw std::invalid_argument("matrix json: column out of range");
            m.rows[i].push_back({static_cast<std::uint32_t>(col - 1), e.at(1).get<double>()});
        }
    return m;
}

void matrix_to_coo(const UlamMatrix& m, std::ostream& out) {
    for (std::size_t i = 0; i < m.n; ++i)
        for (const auto& e : m.rows[i])
            out << (i + 1) << ' ' << (e.col + 1) << ' ' << fmt17(e.p) << '\n';
}

json family_report_to_json(const FamilyReport& rep) {
    json violations = json::array();
    for (const auto& w : rep.violations)
        violations.push_back(
            {{"check", w.check}, {"branch", w.branch + 1}, {"x", w.x}, {"value", w.value}});
    return json{{"is_piecewise_convex", rep.is_piecewise_convex},
                {"origin_in_each_image", rep.origin_in_each_image},
                {"noncontracting", rep.noncontracting},
                {"branch_count_bound", rep.branch_count_bound},
                {"fitted_scale", rep.fitted_scale},
                {"fitted_exponent", rep.fitted_exponent},
                {"local_form_ok", rep.local_form_ok},
                {"family_ok", rep.family_ok()},
                {"violations", std::move(violations)}};
}

json stationary_to_json(const StationaryResult& sol) {
    json j{{"pi", sol.pi},
           {"residual", sol.residual},
           {"iterations", sol.iterations},
           {"converged", sol.converged},
           {"unique", sol.unique},
           {"method", sol.method}};
    if (sol.n_positive_power)
        j["n_delta"] = *sol.n_positive_power;
    else
        j["n_delta"] = nullptr;
    return j;
}

json sweep_record_to_json(const SweepRecord& r) {
    return json{{"alpha", r.alpha},
                {"n_cells", r.n_cells},
                {"delta", r.delta},
                {"K", r.K},
                {"pi1", r.pi1},
                {"pi1_over_delta", r.pi1_over_delta},
                {"pi1_over_delta_pow", r.pi1_over_delta_pow},
                {"tail_z", r.tail_z},
                {"tail_mass", r.tail_mass},
                {"p11", r.p11},
                {"p12", r.p12},
                {"p12_lo", r.p12_lo},
                {"p12_hi", r.p12_hi},
                {"residual", r.residual},
                {"unique", r.unique},
                {"ok", r.ok},
                {"error", r.error}};
}

IntervalMap map_from_json(const json& j) {
    std::vector<Branch> branches;
    for (const auto& bj : j.at("branches")) {
        auto dom = bj.at("domain").get<std::vector<double>>();
        if (dom.size() != 2) throw std::invalid_argument("map json: domain needs two endpoints");
        auto coeff = bj.at("coefficients").get<std::vector<double>>();
        const std::string kind = bj.at("kind").get<std::string>();
        BranchExpr expr;
        if (kind == "affine") {
            if (coeff.size() != 2)
                throw std::invalid_argument("map json: affine branch takes [c0, c1]");
            expr = {coeff[0], coeff[1], 0.0, 1.0};
        } else if (kind == "power") {
            if (coeff.size() != 4)
                throw std::invalid_argument("map json: power branch takes [c0, c1, c2, p]");
            expr = {coeff[0], coeff[1], coeff[2], coeff[3]};
        } else {
            throw std::invalid_argument("map json: unknown branch kind '" + kind + "'");
        }
        branches.push_back(Branch::make({dom[0], dom[1]}, expr));
    }
    std::map<std::string, double> params;
    if (j.contains("params")) params = j.at("params").get<std::map<std::string, double>>();
    return make_interval_map(std::move(branches), j.value("name", "custom"), std::move(params));
}

json map_to_json(const IntervalMap& map) {
    json branches = json::array();
    for (const auto& b : map.branches) {
        json bj{{"domain", {b.domain.lo, b.domain.hi}}};
        if (b.forward.is_affine()) {
            bj["kind"] = "affine";
            bj["coefficients"] = {b.forward.shift, b.forward.affine_slope()};
        } else {
            bj["kind"] = "power";
            bj["coefficients"] = {b.forward.shift, b.forward.slope, b.forward.scale,
                                  b.forward.exponent};
        }
        branches.push_back(std::move(bj));
    }
    return json{{"name", map.name}, {"params", map.params}, {"branches", std::move(branches)}};
}

IntervalMap make_catalog_map(const std::string& name, double alpha) {
    if (name == "mp") return mp_map(alpha);
    if (name == "counterexample") return counterexample_map();
    throw std::invalid_argument("unknown map '" + name + "' (catalog: mp, counterexample)");
}

void write_sweep_csv(std::ostream& out, const json& config, std::span<const SweepRecord> records) {
    out << "# config: " << config.dump() << '\n';
    out << "alpha,n_cells,delta,K,pi1,pi1_over_delta,pi1_over_delta_pow,tail_z,tail_mass,"
           "p11,p12,p12_lo,p12_hi,residual,unique\n";
    for (const auto& r : records) {
        out << fmt17(r.alpha) << ',' << r.n_cells << ',' << fmt17(r.delta) << ',' << fmt17(r.K)
            << ',' << fmt17(r.pi1) << ',' << fmt17(r.pi1_over_delta) << ','
            << fmt17(r.pi1_over_delta_pow) << ',' << fmt17(r.tail_z) << ',' << fmt17(r.tail_mass)
            << ',' << fmt17(r.p11) << ',' << fmt17(r.p12) << ',' << fmt17(r.p12_lo) << ','
            << fmt17(r.p12_hi) << ',' << fmt17(r.residual) << ',' << (r.unique ? "true" : "false")
            << '\n';
    }
}

void write_counterexample_csv(std::ostream& out, const json& config,
                              std::span<const CounterexampleRecord> records) {
    out << "# config: " << config.dump() << '\n';
    out << "n_cells,window,mass_near_half,pi_argmax_cell,residual,unique\n";
    for (const auto& r : records) {
        out << r.n_cells << ',' << fmt17(r.window) << ',' << fmt17(r.mass_near_half) << ','
            << r.pi_argmax_cell << ',' << fmt17(r.residual) << ','
            << (r.unique ? "true" : "false") << '\n';
    }
}

} // namespace ulam::io
