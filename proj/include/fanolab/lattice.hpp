#pragma once

#include <string>
#include <vector>

#include "fanolab/fields.hpp"

namespace fanolab {

using IntMatrix = std::vector<std::vector<Int>>;

// Nondegenerate integral lattice: symmetric Gram matrix with labelled basis.
struct IntegralLattice {
    IntMatrix gram;
    std::vector<std::string> labels;

    IntegralLattice(IntMatrix g, std::vector<std::string> base_labels);
    int rank() const { return static_cast<int>(gram.size()); }
    Int determinant() const;
};

struct Isometry {
    IntMatrix matrix;

    // validated against the lattice on construction
    Isometry(const IntegralLattice& lattice, IntMatrix m);
    int order(int cap = 16) const;  // throws if no finite order <= cap
};

// builders
IntegralLattice lattice_A(int n);
IntegralLattice lattice_D(int n);
IntegralLattice lattice_E(int n);
IntegralLattice lattice_rank1(long k);
IntegralLattice lattice_U();
IntegralLattice twist(const IntegralLattice& l, long m);
IntegralLattice direct_sum(const IntegralLattice& a, const IntegralLattice& b);

Int int_matrix_det(IntMatrix m);

// Smith normal form diagonal d1 | d2 | ... (non-negative); zero entries last.
std::vector<Int> smith_normal_form(IntMatrix m);

// invariant factors != 1 of the discriminant group L*/L
std::vector<Int> discriminant_group(const IntegralLattice& l);

// Saturated kernel basis of an integer matrix (columns form the basis);
// `cols` is the ambient dimension, needed when m has no rows.
IntMatrix integer_kernel(const IntMatrix& m, int cols);

struct InvariantSplit {
    IntegralLattice invariant;
    IntegralLattice coinvariant;
    IntMatrix invariant_basis;    // columns in the ambient lattice
    IntMatrix coinvariant_basis;  // columns in the ambient lattice
};

InvariantSplit invariant_sublattice(const IntegralLattice& l, const Isometry& g);

struct LatticeTableRow {
    int i = 0;
    int rank_T = 0, rank_R = 0;
    Int det_T, det_R;
    std::vector<Int> disc_T, disc_R;
    bool rank_compatible = false;
    // the positive-definite convention and the (-1)-twist both reported
    Int det_T_neg, det_R_neg;
    bool sign_convention_flagged = true;
};

// Builds T_i and R_i per the i = 2, 3, 4 table and reports their invariants.
LatticeTableRow verify_paper_table(int i);

}  // namespace fanolab
