#ifndef FORMCLASS_CLASSGROUPS_HPP
#define FORMCLASS_CLASSGROUPS_HPP

#include <optional>
#include <vector>

#include "formclass/orders.hpp"
#include "formclass/quadforms.hpp"

// Level structures (N, G), the attached congruence subgroup, enumeration of
// the level-N form classes, the induced group law through the ideal side,
// and the signed classes that adjoin complex conjugation.
namespace formclass::classgroups {

struct LevelStructure {
    long modulus = 1;             // N
    std::vector<long> residues;   // subgroup of (Z/NZ)^x, sorted, contains 1

    LevelStructure() = default;
    LevelStructure(long n, std::vector<long> g);  // validates the subgroup axioms

    static LevelStructure trivial(long n);
    static LevelStructure full(long n);

    bool contains_residue(long t) const;
    bool is_subset_of(const LevelStructure& other) const;
};

// True iff g is congruent mod N to an upper-triangular matrix whose
// upper-left entry lies in G.
bool gamma_g_contains(const quadforms::UniMat& g, const LevelStructure& level);

struct ClassGroup {
    orders::Order order;
    LevelStructure level;
    std::vector<quadforms::Form> reps;                   // reps[0] = principal form
    std::optional<std::vector<std::vector<int>>> table;  // composition by index

    long size() const { return static_cast<long>(reps.size()); }
};

// Enumerates the level-N classes via double cosets in SL2(Z/N): for each
// SL2(Z)-reduced form, orbits are aut(Q) \ SL2(Z/N) / image(Gamma_G), kept
// when some member has first coefficient prime to N, and represented by the
// lift with minimal (a, |b|, b).
ClassGroup enumerate_classes(const orders::Order& ord, const LevelStructure& level);

// Fills the composition table (and checks it is a group while doing so).
void build_table(ClassGroup& cg);

// Index of the unique class equivalent to q; q must lie in the level set.
int class_of(const quadforms::Form& q, const ClassGroup& cg);

// Group law through the ideal side: the unique k with
// [I(i) I(j) I(k)^-1] trivial in I(O,N)/P_G. Exactly one candidate must
// accept, otherwise AmbiguousClass.
int compose(int i, int j, const ClassGroup& cg);
int inverse(int i, const ClassGroup& cg);
inline int identity(const ClassGroup&) { return 0; }

struct SignedClassGroup {
    const ClassGroup* base;
    std::vector<std::pair<int, int>> elements;  // (class index, sign)
};

// The +/- classes; the (-, principal) element is the distinguished
// conjugation element.
SignedClassGroup signed_classes(const ClassGroup& cg);

// Index map CG1 -> CG2 for G1 contained in G2 (same order and modulus).
std::vector<int> natural_surjection(const ClassGroup& cg1, const ClassGroup& cg2);

// Lift of a matrix given mod N to an exact SL2(Z) element.
quadforms::UniMat lift_sl2_zn(long a, long b, long c, long d, long n);

}  // namespace formclass::classgroups

#endif
