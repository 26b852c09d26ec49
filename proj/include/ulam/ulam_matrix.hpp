#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ulam/interval_maps.hpp"
#include "ulam/partitions.hpp"

namespace ulam {

struct SparseEntry {
    std::uint32_t col = 0;
    double p = 0.0;
};

/// Sparse row-stochastic transition matrix of the discretized transfer
/// operator: p[i][j] = m(cell_i ∩ T^-1 cell_j) / m(cell_i). Rows are kept as
/// sorted sparse lists; supports are O(max slope) cells per branch.
struct UlamMatrix {
    std::size_t n = 0;
    std::vector<std::vector<SparseEntry>> rows;
    Partition partition;
    std::string map_name;
    std::map<std::string, double> map_params;
    /// Largest |row sum - 1| before exact renormalization; the real accuracy
    /// metric of the assembly (root-finding slivers land here).
    double max_row_residual = 0.0;

    double entry(std::size_t i, std::size_t j) const;
};

/// Assembles the matrix by walking, per column cell, the branch preimages
/// (single intervals under monotone branches) and clipping them against the
/// source cells. Rows are renormalized to sum exactly 1 afterwards; a
/// pre-normalization residual above 1e-8 signals a branch-inversion bug and
/// throws.
UlamMatrix build_matrix(const IntervalMap& map, const Partition& p);

enum class ApplyDirection { left, right };

/// Sparse vector-matrix product. The left action (measures, row vectors) is
/// the one used throughout; it conserves the total mass of w.
std::vector<double> apply(const UlamMatrix& P, std::span<const double> w, ApplyDirection dir);

/// Closed-form diagnostics for the first row near the neutral fixed point:
/// z1 solves z + z^(1+alpha) = |cell_1|, giving p11 = z1/|cell_1| and
/// p12 = 1 - p11, with the bracket [2^(-1-alpha)|cell_1|^alpha, |cell_1|^alpha]
/// for p12. Valid once |cell_1|^(1+alpha) < |cell_2| (checked; the error
/// message reports both lengths when delta is not small enough).
struct FirstRowDiagnostics {
    double z1 = 0.0;
    double z2 = 0.0;
    double p11 = 0.0;
    double p12 = 0.0;
    double p12_lower = 0.0;
    double p12_upper = 0.0;
    double alpha = 0.0;
    double delta = 0.0;
    double len1 = 0.0; // |cell_1|
    double len2 = 0.0; // |cell_2|
};

FirstRowDiagnostics first_row_diagnostics(double alpha, const Partition& p);

struct FirstRowCrossCheck {
    double max_mismatch = 0.0;     // worst |closed form - assembled| over p11, p12
    bool support_first_two = true; // row 1 support is exactly {1, 2}
};

/// Compares the closed forms against row 1 of an assembled matrix.
FirstRowCrossCheck cross_check_first_row(const FirstRowDiagnostics& d, const UlamMatrix& P);

} // namespace ulam
