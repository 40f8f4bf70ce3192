#pragma once

#include "hardcomplete/gram.hpp"

#include <vector>

namespace hardcomplete {

/// Result of decode_partition: the split plus the measurements the decoding
/// rests on.
struct DecodedPartition {
    PartitionSplit split;
    std::vector<int> rotation_signs;  ///< s_i per item
    double planarity_residual = 0.0;  ///< third singular value (dim-3 inputs)
    double angle_sum = 0.0;           ///< Σ s_i a_i, should be ~0
    double in_sum = 0.0;              ///< Σ_{i∈I} a_i (normalized weights)
};

/// Result of decode_assignment with the soundness diagnostics.
struct DecodedAssignment {
    Assignment assignment;
    std::vector<double> magnitudes;        ///< per variable, min over odd i of |⟨ũ_(x0,i),ũ_(x,p(i))⟩|
    std::vector<double> clause_residuals;  ///< |⟨ũ_C0,ũ_C⟩ − (1−2/k)| per clause
    double delta_threshold = 0.0;          ///< min(2/13k², 2/(24k+k²))
    double repair_max_drift = 0.0;         ///< max ‖ũ − u‖ over repaired vectors
    bool clauses_within_threshold = true;
};

/// Reads the rotation directions of a Partition-gadget vector assignment and
/// returns I = {i : rotation i is positive}. Three-dimensional inputs are
/// first projected onto their best-fit plane (top-2 principal directions of
/// the stacked basis vectors); a planarity residual above tol is an error.
/// A global reflection of the input flips every sign, which yields the
/// complementary — equally valid — split.
DecodedPartition decode_partition(const GramConstraintSystem& sys, const VectorAssignment& va,
                                  double tol = 1e-6);

/// Restores the internal variable constraints of a CSP-gadget assignment
/// exactly: per block, each basis vector is renormalized perpendicular to the
/// span of its (partially repaired) peers, then all sum vectors are rebuilt
/// from the repaired basis. Moves each vector at most ~3√eps when the input
/// satisfies the internal constraints within eps. Clause vectors are passed
/// through untouched. Throws if a variable block is numerically degenerate.
VectorAssignment repair_internal(const VectorAssignment& va, const GramConstraintSystem& sys,
                                 double eps);

/// Decodes f(x) = sign(⟨ũ_(x0,1), ũ_(x,2)⟩) after repairing the internal
/// constraints. Requires the ambient dimension to be ≤ 4k−1 and the paired
/// inner products to agree in sign across all odd indices (an inconsistency
/// means the residuals are too large for the soundness regime and raises an
/// error). Clause diagnostics are computed from clause vectors rebuilt out of
/// the repaired blocks.
DecodedAssignment decode_assignment(const GramConstraintSystem& sys, const VectorAssignment& va,
                                    double eps);

} // namespace hardcomplete
