#pragma once

#include <functional>

#include "lgglue/series.hpp"

namespace lgglue {

// One signed monomial: coef * prod v^expo over a fixed VarSet.
struct MonTerm {
    Rat coef;
    Expo expo;
};

// Binomial (or single-monomial) factor, e.g. (1 - y), (y - x0), x0.
// `small` marks the term that vanishes at the series expansion point.
struct Binomial {
    std::vector<MonTerm> terms; // size 1 or 2, distinct monomials
    int small = -1;
};

struct FactorPower {
    Binomial factor;
    int power = 1;
};

// Exact rational monomial expression kept in factored form:
//   constant * prod v^monomial * prod factor^power.
struct FactoredInvariant {
    VarSetPtr vars;
    Rat constant = 1;
    Expo monomial; // one slot per variable
    std::vector<FactorPower> factors;

    bool is_one() const;
};

FactoredInvariant invariant_one(VarSetPtr vars);
// constant * prod v^expo
FactoredInvariant invariant_monomial(VarSetPtr vars, const Rat& c, const Expo& e);

// Canonical form: factors cleared of common monomials, leading coefficient 1,
// identical factors merged, single-term factors folded into the monomial.
FactoredInvariant normalize(const FactoredInvariant& f);
FactoredInvariant multiply(const FactoredInvariant& a, const FactoredInvariant& b);
FactoredInvariant power(const FactoredInvariant& a, int k);

// Substitution value: a monomial or a binomial of monomials.
struct SubstVal {
    std::vector<MonTerm> terms; // size 1 or 2
};

using Substitution = std::map<int, SubstVal>; // var index -> value

// Applies the identification to a factored invariant.  Binomial values are
// admitted only where the result collapses back to at most two monomials
// (BAD_SUBSTITUTION otherwise); negative powers of binomial values inside
// binomial factors are rejected.
FactoredInvariant substitute(const FactoredInvariant& f, const Substitution& s);

struct RelationReport {
    bool ok = false;
    FactoredInvariant residual; // lhs/rhs after substitution, when not ok
};

// Exact check prod(lhs) == prod(rhs) after applying the identification.
RelationReport check_relation(const std::vector<FactoredInvariant>& lhs,
                              const std::vector<FactoredInvariant>& rhs, const Substitution& s);

// ---------------------------------------------------------------------------
// Series expansion

// Pullback of a power series with coefficient rule `base` through a vector of
// functional invariants: prefactor * sum_d base(d) * prod_i invariant_i^d_i,
// every negative factor power expanded at its small term, truncated exactly.
struct PullbackSpec {
    int base_rank = 0;                              // number of base directions
    std::function<Rat(const std::vector<int>&)> base; // coefficient rule (rank 0: treated as 1)
    std::vector<FactoredInvariant> invariants;      // one per base direction
    FactoredInvariant prefactor;
};

Series pullback_series(const PullbackSpec& spec, VarSetPtr vars, Trunc trunc);

// Expansion of a bare factored expression (rank-0 pullback).
Series expand_invariant(const FactoredInvariant& f, VarSetPtr vars, Trunc trunc);

// Convenience: univariate base with one invariant.
Series pullback_series(const std::function<Rat(int)>& base, const FactoredInvariant& invariant,
                       const FactoredInvariant& prefactor, VarSetPtr vars, Trunc trunc);

// d -> (3d)!/(d!)^3, the holomorphic period rule of the mirror cubic family.
Rat mirror_cubic_coeff(int d);

std::string invariant_to_text(const FactoredInvariant& f);

} // namespace lgglue
