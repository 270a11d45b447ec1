#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lgglue/rational.hpp"

namespace lgglue {

enum class VarKind : uint8_t { power, laurent };

// Ordered variable list shared by every series of one computation.
// POWER variables carry exponents >= 0 counted against a total-degree bound;
// LAURENT variables carry exponents in a symmetric per-variable window.
struct VarSet {
    std::vector<std::string> names;
    std::vector<VarKind> kinds;

    int index_of(const std::string& name) const
    {
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == name)
                return static_cast<int>(i);
        return -1;
    }
    size_t size() const { return names.size(); }
    bool operator==(const VarSet& o) const { return names == o.names && kinds == o.kinds; }
};

using VarSetPtr = std::shared_ptr<const VarSet>;

VarSetPtr make_varset(std::vector<std::pair<std::string, VarKind>> vars);
// Same variables with one removed (used by residue extraction).
VarSetPtr varset_without(const VarSetPtr& vs, int idx);

struct Trunc {
    int degree = 0;             // total-degree bound over POWER variables
    std::vector<int> window;    // per-variable symmetric bound; ignored for POWER vars

    bool operator==(const Trunc& o) const { return degree == o.degree && window == o.window; }
};

using Expo = std::vector<int>;

// Sentinels for the certified-complete exponent interval of a Laurent variable.
inline constexpr int comp_neg_inf = -(1 << 28);
inline constexpr int comp_pos_inf = (1 << 28);

// Exact multivariate truncated Laurent/power series over Rat.
//
// Alongside the term map, each Laurent variable carries a certified
// completeness interval [comp_lo, comp_hi]: every term of the untruncated
// object whose exponents lie jointly within all intervals (and within the
// power-degree bound) is guaranteed to be stored.  Products shrink the
// intervals; residue extraction refuses to run unless exponent zero is
// certified.  This is the window-overflow guard: a window too small for a
// computation surfaces as an error instead of a silently wrong answer.
class Series {
public:
    Series() = default;
    Series(VarSetPtr vars, Trunc trunc);

    const VarSetPtr& vars() const { return vars_; }
    const Trunc& trunc() const { return trunc_; }
    const std::map<Expo, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    // True if the exponent tuple is inside the truncation box.
    bool in_box(const Expo& e) const;
    // Adds c to the coefficient at e; silently drops out-of-box terms and
    // returns false in that case.
    bool add_term(const Expo& e, const Rat& c);
    Rat coeff(const Expo& e) const;

    int comp_lo(int var) const { return comp_lo_[var]; }
    int comp_hi(int var) const { return comp_hi_[var]; }
    void set_comp(int var, int lo, int hi);
    void intersect_comp(int var, int lo, int hi);
    // Marks the variable complete in a direction only up to the window.
    void clamp_comp_to_window(int var);

    bool operator==(const Series& o) const
    {
        return vars_ && o.vars_ && *vars_ == *o.vars_ && trunc_ == o.trunc_ && terms_ == o.terms_;
    }

private:
    VarSetPtr vars_;
    Trunc trunc_;
    std::map<Expo, Rat> terms_;
    std::vector<int> comp_lo_, comp_hi_;

    friend Series mul(const Series&, const Series&);
    friend Series hadamard(const Series&, const Series&, const std::set<int>&);
};

Series series_zero(VarSetPtr vars, Trunc trunc);
Series series_const(VarSetPtr vars, Trunc trunc, const Rat& c);
// Monomial c * prod vars^expo.
Series series_monomial(VarSetPtr vars, Trunc trunc, const Rat& c, const Expo& e);

Series add(const Series& a, const Series& b);
Series sub(const Series& a, const Series& b);
Series neg(const Series& a);
Series scale(const Series& a, const Rat& c);
Series mul(const Series& a, const Series& b);

// Hadamard product in star_vars (exponents matched pointwise), Cauchy
// convolution in the remaining variables.
Series hadamard(const Series& a, const Series& b, const std::set<int>& star_vars);

// Constant-term extraction in a Laurent variable: (1/2pi i) \oint . dv/v.
// The variable is removed from the variable set of the result.
Series residue(const Series& a, int var);

// Expansion of 1/(1 - c*m)^(k+1) with m a non-unit monomial, to the box.
Series expand_inverse_binomial(VarSetPtr vars, Trunc trunc, const Rat& c, const Expo& m, long k);

// Substitutes var -> c * prod(target)^e, exactly.  The target exponents must
// not involve var itself.  Throws WINDOW_OVERFLOW if a mapped term leaves the
// box while completeness cannot be preserved.
Series substitute_monomial(const Series& a, int var, const Rat& c, const Expo& target);

// Reinterprets a series over a sub-varset into a larger one (absent variables
// get exponent zero).  Names must match; windows of the target must be at
// least as wide.
Series embed_into(const Series& a, VarSetPtr target, const Trunc& target_trunc);

// Sets a Laurent variable to 1 by summing over its exponents.  Requires full
// certification of the variable (no truncation may have occurred in it).
Series collapse_var(const Series& a, int var);

struct Mismatch {
    Expo expo;
    Rat lhs;
    Rat rhs;
};

// First differing coefficient (in canonical term order) between two series
// sharing vars/trunc, restricted to the jointly certified region; throws
// WINDOW_OVERFLOW if either side stores a term outside the joint region.
std::optional<Mismatch> first_difference(const Series& a, const Series& b);

// Canonical text serialization: one term per line, "e1 e2 ... ek num/den",
// terms in lexicographic exponent order.
std::string series_to_text(const Series& a);
Series series_from_text(VarSetPtr vars, Trunc trunc, const std::string& text);

} // namespace lgglue
