#include "ulam/partitions.hpp"

#include <algorithm>
#include <stdexcept>

#include "ulam/rng.hpp"

namespace ulam {

Partition::Partition(std::vector<double> breakpoints)
    : breakpoints_(std::move(breakpoints)) {
    if (breakpoints_.size() < 2)
        throw std::invalid_argument("partition needs at least two breakpoints");
    if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0)
        throw std::invalid_argument("partition breakpoints must span [0,1]");
    double min_len = 2.0, max_len = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
        double len = breakpoints_[i + 1] - breakpoints_[i];
        if (!(len > 0.0))
            throw std::invalid_argument("partition breakpoints must be strictly increasing");
        min_len = std::min(min_len, len);
        max_len = std::max(max_len, len);
    }
    delta_ = max_len;
    ratio_K_ = max_len / min_len;
}

std::size_t Partition::locate(double x) const {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("locate: point outside [0,1]");
    if (x == 1.0) return size() - 1;
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

Partition uniform_partition(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_partition: n must be positive");
    std::vector<double> bps(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        bps[i] = static_cast<double>(i) / static_cast<double>(n);
    bps[n] = 1.0;
    return Partition(std::move(bps));
}

Partition quasi_uniform_partition(std::size_t n, double K, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("quasi_uniform_partition: n must be positive");
    if (K < 1.0) throw std::invalid_argument("quasi_uniform_partition: K must be >= 1");
    if (K == 1.0) return uniform_partition(n); // the length interval degenerates

    std::mt19937_64 gen(seed);
    const double root_k = std::sqrt(K);
    const double lo = 1.0 / (static_cast<double>(n) * root_k);
    const double hi = root_k / static_cast<double>(n);

    std::vector<double> lens(n);
    for (auto& len : lens) len = uniform_in(gen, lo, hi);

    std::vector<double> bps(n + 1);
    bps[0] = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += lens[i];
        bps[i + 1] = acc;
    }
    for (std::size_t i = 1; i < n; ++i) bps[i] /= acc;
    bps[n] = 1.0;
    return Partition(std::move(bps));
}

} // namespace ulam
