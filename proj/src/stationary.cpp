#include "ulam/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace ulam {

namespace {

double residual_l1(const UlamMatrix& P, const std::vector<double>& pi,
                   std::vector<double>& scratch) {
    scratch.assign(P.n, 0.0);
    for (std::size_t i = 0; i < P.n; ++i) {
        const double wi = pi[i];
        if (wi == 0.0) continue;
        for (const auto& e : P.rows[i]) scratch[e.col] += wi * e.p;
    }
    double r = 0.0;
    for (std::size_t i = 0; i < P.n; ++i) r += std::fabs(scratch[i] - pi[i]);
    return r;
}

void normalize_l1(std::vector<double>& v) {
    double s = std::accumulate(v.begin(), v.end(), 0.0);
    for (auto& x : v) x /= s;
}

// Stationarity as a linear system: (P^T - I) x = 0 with the first equation
// replaced by the normalization sum(x) = 1. Solved by sparse LU plus two
// rounds of iterative refinement; residuals land at machine-epsilon scale.
std::optional<std::vector<double>> direct_stationary(const UlamMatrix& P) {
    using SpMat = Eigen::SparseMatrix<double>;
    const auto n = static_cast<Eigen::Index>(P.n);

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(P.n * 6 + P.n);
    for (Eigen::Index c = 0; c < n; ++c) trips.emplace_back(0, c, 1.0);
    for (std::size_t i = 0; i < P.n; ++i)
        for (const auto& e : P.rows[i])
            if (e.col != 0) trips.emplace_back(e.col, i, e.p);
    for (Eigen::Index d = 1; d < n; ++d) trips.emplace_back(d, d, -1.0);

    SpMat A(n, n);
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();

    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> solver;
    solver.analyzePattern(A);
    solver.factorize(A);
    if (solver.info() != Eigen::Success) return std::nullopt;

    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b[0] = 1.0;
    Eigen::VectorXd x = solver.solve(b);
    if (solver.info() != Eigen::Success) return std::nullopt;
    for (int round = 0; round < 2; ++round) {
        Eigen::VectorXd r = b - A * x;
        x += solver.solve(r);
    }

    std::vector<double> pi(P.n);
    for (Eigen::Index i = 0; i < n; ++i) pi[i] = std::max(x[i], 0.0);
    normalize_l1(pi);
    return pi;
}

struct SccResult {
    std::size_t closed_classes = 0;
    std::vector<int> component;       // component id per state
    std::vector<char> component_closed;
};

// Iterative Tarjan on the support digraph; recursion would overflow on the
// long one-way chains these matrices produce.
SccResult strongly_connected_components(const UlamMatrix& P) {
    const std::size_t n = P.n;
    std::vector<int> index(n, -1), lowlink(n, 0), component(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<std::size_t> stack;
    int next_index = 0, next_component = 0;

    struct Frame {
        std::size_t v;
        std::size_t edge = 0;
    };
    std::vector<Frame> call;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call.push_back({root});
        while (!call.empty()) {
            Frame& f = call.back();
            std::size_t v = f.v;
            if (f.edge == 0) {
                index[v] = lowlink[v] = next_index++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            bool descended = false;
            while (f.edge < P.rows[v].size()) {
                std::size_t w = P.rows[v][f.edge].col;
                ++f.edge;
                if (index[w] == -1) {
                    call.push_back({w});
                    descended = true;
                    break;
                }
                if (on_stack[w]) lowlink[v] = std::min(lowlink[v], index[w]);
            }
            if (descended) continue;
            if (lowlink[v] == index[v]) {
                while (true) {
                    std::size_t w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    component[w] = next_component;
                    if (w == v) break;
                }
                ++next_component;
            }
            call.pop_back();
            if (!call.empty()) {
                std::size_t parent = call.back().v;
                lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
            }
        }
    }

    SccResult res;
    res.component = std::move(component);
    res.component_closed.assign(next_component, 1);
    for (std::size_t v = 0; v < n; ++v)
        for (const auto& e : P.rows[v])
            if (res.component[e.col] != res.component[v])
                res.component_closed[res.component[v]] = 0;
    for (char c : res.component_closed)
        if (c) ++res.closed_classes;
    return res;
}

// gcd of cycle lengths through one state of a closed class, via BFS levels
bool class_aperiodic(const UlamMatrix& P, const SccResult& scc, int cls) {
    std::size_t start = P.n;
    for (std::size_t v = 0; v < P.n; ++v)
        if (scc.component[v] == cls) {
            start = v;
            break;
        }
    if (start == P.n) return false;
    std::vector<std::int64_t> dist(P.n, -1);
    std::vector<std::size_t> queue{start};
    dist[start] = 0;
    std::int64_t g = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        std::size_t v = queue[head];
        for (const auto& e : P.rows[v]) {
            if (scc.component[e.col] != cls) continue;
            if (dist[e.col] == -1) {
                dist[e.col] = dist[v] + 1;
                queue.push_back(e.col);
            } else {
                g = std::gcd(g, std::abs(dist[v] + 1 - dist[e.col]));
            }
        }
    }
    return g == 1;
}

// row-major bit matrix for boolean powers of the support pattern
struct BitMatrix {
    std::size_t n = 0, words = 0;
    std::vector<std::uint64_t> bits;

    explicit BitMatrix(std::size_t n_) : n(n_), words((n_ + 63) / 64), bits(n_ * words, 0) {}
    std::uint64_t* row(std::size_t i) { return bits.data() + i * words; }
    const std::uint64_t* row(std::size_t i) const { return bits.data() + i * words; }
    void set(std::size_t i, std::size_t j) { row(i)[j / 64] |= std::uint64_t(1) << (j % 64); }

    bool all_positive() const {
        const std::uint64_t last_mask =
            (n % 64) ? ((std::uint64_t(1) << (n % 64)) - 1) : ~std::uint64_t(0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t* r = row(i);
            for (std::size_t w = 0; w + 1 < words; ++w)
                if (r[w] != ~std::uint64_t(0)) return false;
            if (r[words - 1] != last_mask) return false;
        }
        return true;
    }
};

} // namespace

StationaryResult stationary_distribution(const UlamMatrix& P, const StationaryOptions& opt) {
    if (P.n == 0) throw std::invalid_argument("stationary_distribution: empty matrix");
    StationaryResult res;
    res.method = opt.cesaro ? "cesaro" : "power";

    const auto scc = strongly_connected_components(P);
    res.unique = scc.closed_classes == 1;

    std::vector<double> pi(P.n, 1.0 / static_cast<double>(P.n));
    std::vector<double> next(P.n, 0.0);
    std::vector<double> cesaro_sum(opt.cesaro ? P.n : 0, 0.0);
    std::vector<double> scratch;

    double residual = std::numeric_limits<double>::infinity();
    double last_checkpoint_residual = std::numeric_limits<double>::infinity();
    constexpr std::int64_t kCheckEvery = 512;
    bool switched = false;
    std::int64_t it = 0;

    while (opt.method != StationaryOptions::Method::direct && it < opt.max_iter) {
        next.assign(P.n, 0.0);
        for (std::size_t i = 0; i < P.n; ++i) {
            const double wi = pi[i];
            if (wi == 0.0) continue;
            for (const auto& e : P.rows[i]) next[e.col] += wi * e.p;
        }
        residual = 0.0;
        for (std::size_t i = 0; i < P.n; ++i) residual += std::fabs(next[i] - pi[i]);
        normalize_l1(next);
        pi.swap(next);
        ++it;

        if (opt.cesaro) {
            for (std::size_t i = 0; i < P.n; ++i) cesaro_sum[i] += pi[i];
            if (it % 64 == 0) {
                std::vector<double> avg(P.n);
                for (std::size_t i = 0; i < P.n; ++i) avg[i] = cesaro_sum[i] / static_cast<double>(it);
                normalize_l1(avg);
                double avg_res = residual_l1(P, avg, scratch);
                if (avg_res < opt.tol) {
                    res.pi = std::move(avg);
                    res.residual = avg_res;
                    res.iterations = it;
                    res.converged = true;
                    return res;
                }
            }
        }

        if (residual < opt.tol) {
            res.converged = true;
            break;
        }

        // Stall detection: estimate the decay rate over a checkpoint window
        // and switch to the direct solve when the tolerance is projected to
        // be out of reach within the iteration budget.
        if (opt.method == StationaryOptions::Method::automatic && !opt.cesaro &&
            it % kCheckEvery == 0) {
            if (std::isfinite(last_checkpoint_residual) && residual > 0.0) {
                double rate = std::pow(residual / last_checkpoint_residual,
                                       1.0 / static_cast<double>(kCheckEvery));
                bool hopeless = rate >= 1.0;
                if (!hopeless) {
                    double needed = std::log(opt.tol / residual) / std::log(rate);
                    hopeless = needed > static_cast<double>(opt.max_iter - it);
                }
                if (hopeless) break;
            }
            last_checkpoint_residual = residual;
        }
    }
    res.iterations = it;

    if (opt.cesaro && !res.converged && it > 0) {
        // report the averaged iterate, which is what this mode converges on
        std::vector<double> avg(P.n);
        for (std::size_t i = 0; i < P.n; ++i) avg[i] = cesaro_sum[i] / static_cast<double>(it);
        normalize_l1(avg);
        residual = residual_l1(P, avg, scratch);
        pi = std::move(avg);
    }

    const bool need_direct =
        !res.converged &&
        (opt.method == StationaryOptions::Method::direct ||
         (opt.method == StationaryOptions::Method::automatic && !opt.cesaro));
    if (need_direct) {
        if (auto direct = direct_stationary(P)) {
            pi = std::move(*direct);
            // polish: a short smoothing run that also recomputes the honest residual
            for (int polish = 0; polish < 64; ++polish) {
                next.assign(P.n, 0.0);
                for (std::size_t i = 0; i < P.n; ++i) {
                    const double wi = pi[i];
                    if (wi == 0.0) continue;
                    for (const auto& e : P.rows[i]) next[e.col] += wi * e.p;
                }
                residual = 0.0;
                for (std::size_t i = 0; i < P.n; ++i) residual += std::fabs(next[i] - pi[i]);
                normalize_l1(next);
                pi.swap(next);
                ++res.iterations;
                if (residual < opt.tol) break;
            }
            res.converged = residual < opt.tol;
            res.method = "power+direct";
            switched = true;
        }
    }
    if (!switched && !res.converged && it < opt.max_iter &&
        opt.method == StationaryOptions::Method::automatic) {
        // direct solve unavailable; spend the remaining budget on power steps
        while (it < opt.max_iter && residual >= opt.tol) {
            next.assign(P.n, 0.0);
            for (std::size_t i = 0; i < P.n; ++i) {
                const double wi = pi[i];
                if (wi == 0.0) continue;
                for (const auto& e : P.rows[i]) next[e.col] += wi * e.p;
            }
            residual = 0.0;
            for (std::size_t i = 0; i < P.n; ++i) residual += std::fabs(next[i] - pi[i]);
            normalize_l1(next);
            pi.swap(next);
            ++it;
        }
        res.iterations = it;
        res.converged = residual < opt.tol;
    }

    res.pi = std::move(pi);
    res.residual = residual;
    return res;
}

ErgodicityReport check_unique_ergodicity(const UlamMatrix& P, const ErgodicityOptions& opt) {
    ErgodicityReport rep;
    const auto scc = strongly_connected_components(P);
    rep.closed_classes = scc.closed_classes;
    rep.unique = scc.closed_classes == 1;
    if (!rep.unique) return rep;

    int closed_id = -1;
    for (std::size_t c = 0; c < scc.component_closed.size(); ++c)
        if (scc.component_closed[c]) closed_id = static_cast<int>(c);
    rep.aperiodic = class_aperiodic(P, scc, closed_id);

    if (P.n > opt.positivity_size_cap) return rep;

    BitMatrix base(P.n);
    for (std::size_t i = 0; i < P.n; ++i)
        for (const auto& e : P.rows[i]) base.set(i, e.col);

    BitMatrix power = base;
    std::uint64_t work = 0;
    for (int k = 1; k <= opt.n_max; ++k) {
        if (power.all_positive()) {
            rep.n_positive_power = k;
            return rep;
        }
        if (k == opt.n_max) break;
        BitMatrix nextp(P.n);
        for (std::size_t i = 0; i < P.n; ++i) {
            const std::uint64_t* src = power.row(i);
            std::uint64_t* dst = nextp.row(i);
            for (std::size_t w = 0; w < power.words; ++w) {
                std::uint64_t word = src[w];
                while (word) {
                    std::size_t j = w * 64 + static_cast<std::size_t>(std::countr_zero(word));
                    word &= word - 1;
                    const std::uint64_t* rj = base.row(j);
                    for (std::size_t t = 0; t < base.words; ++t) dst[t] |= rj[t];
                    work += base.words;
                }
            }
        }
        if (work > opt.work_budget) return rep; // probe abandoned, SCC result stands
        power = std::move(nextp);
    }
    return rep;
}

DiscreteSRB srb_from_pi(std::span<const double> pi, const Partition& partition) {
    if (pi.size() != partition.size())
        throw std::invalid_argument("srb_from_pi: vector length != cell count");
    std::vector<double> densities(pi.size());
    for (std::size_t i = 0; i < pi.size(); ++i)
        densities[i] = pi[i] / partition.cell_length(i);
    DiscreteSRB srb;
    srb.pi.assign(pi.begin(), pi.end());
    srb.measure = make_step_measure(0.0, partition, std::move(densities));
    return srb;
}

double tail_mass(const DiscreteSRB& srb, double z) {
    if (!(z > 0.0 && z <= 1.0)) throw std::domain_error("tail_mass: z must be in (0,1]");
    return measure_of_interval(srb.measure, {z, 1.0});
}

} // namespace ulam
