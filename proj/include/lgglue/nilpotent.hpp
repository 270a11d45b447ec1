#pragma once

#include <cstdint>
#include <map>

#include "lgglue/series.hpp"

namespace lgglue {

// Square-free nilpotent generators: each one squares to zero, products of
// distinct generators are basis monomials (2^g of them, encoded as bitmasks).
struct NilGens {
    std::vector<std::string> names;

    int index_of(const std::string& n) const
    {
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == n)
                return static_cast<int>(i);
        return -1;
    }
    size_t size() const { return names.size(); }
    bool operator==(const NilGens& o) const { return names == o.names; }
};

using NilGensPtr = std::shared_ptr<const NilGens>;
using Mask = uint32_t;

NilGensPtr make_gens(std::vector<std::string> names);

// Degree <= 1 element: constant + linear part.  Used for divisor classes,
// generator substitutions and log-prefactor exponents.
struct LinearNil {
    Rat constant = 0;
    std::vector<Rat> coef; // one slot per generator

    LinearNil() = default;
    explicit LinearNil(size_t gens) : coef(gens, Rat(0)) {}
    bool is_zero() const;
    bool operator==(const LinearNil& o) const;
};

LinearNil linear_add(const LinearNil& a, const LinearNil& b);
LinearNil linear_scale(const LinearNil& a, const Rat& c);

// Element of the square-free quotient with rational coefficients; the
// coefficient carrier for one lattice degree of an I-function.
struct NilScalar {
    std::map<Mask, Rat> c;

    bool is_zero() const { return c.empty(); }
    Rat at(Mask m) const
    {
        auto it = c.find(m);
        return it == c.end() ? Rat(0) : it->second;
    }
    void add(Mask m, const Rat& v);
};

NilScalar scalar_one(size_t ngens);
NilScalar scalar_from_linear(const LinearNil& a);
NilScalar scalar_add(const NilScalar& a, const NilScalar& b);
NilScalar scalar_mul(const NilScalar& a, const NilScalar& b, size_t ngens);
// Multiplicative inverse; NOT_UNIT when the generator-free part vanishes.
NilScalar scalar_invert(const NilScalar& a, size_t ngens);
NilScalar scalar_substitute(const NilScalar& a, int gen, const LinearNil& expr, size_t ngens);

// Series-valued element of the square-free quotient ring.
class NilSeries {
public:
    NilSeries() = default;
    NilSeries(NilGensPtr gens, VarSetPtr vars, Trunc trunc);

    const NilGensPtr& gens() const { return gens_; }
    const VarSetPtr& vars() const { return vars_; }
    const Trunc& trunc() const { return trunc_; }
    const std::map<Mask, Series>& components() const { return comp_; }

    Series& component(Mask m); // creates an empty component on demand
    const Series* find(Mask m) const;
    void add_term(Mask m, const Expo& e, const Rat& c);
    void set_component(Mask m, Series s);
    void prune(); // drops zero components

    bool is_zero() const;

private:
    NilGensPtr gens_;
    VarSetPtr vars_;
    Trunc trunc_;
    std::map<Mask, Series> comp_;
};

NilSeries nil_from_series(NilGensPtr gens, const Series& s);
NilSeries nil_const(NilGensPtr gens, VarSetPtr vars, Trunc trunc, const NilScalar& c);

NilSeries nil_add(const NilSeries& a, const NilSeries& b);
NilSeries nil_sub(const NilSeries& a, const NilSeries& b);
NilSeries nil_scale(const NilSeries& a, const Rat& c);
NilSeries nil_mul(const NilSeries& a, const NilSeries& b);
NilSeries nil_mul_scalar(const NilSeries& a, const NilScalar& c);
// Inverse by finite geometric expansion of the nilpotent + q-positive part.
NilSeries nil_invert_unit(const NilSeries& a);
// Replaces a generator by an affine expression in the others; SELF_REFERENCE
// if the expression mentions the generator.
NilSeries substitute_generator(const NilSeries& a, int gen, const LinearNil& expr);
NilSeries nil_hadamard(const NilSeries& a, const NilSeries& b, const std::set<int>& star_vars);
NilSeries nil_residue(const NilSeries& a, int var);
NilSeries nil_substitute_monomial(const NilSeries& a, int var, const Rat& c, const Expo& target);
// Generator-free specialization: the mask-0 component.
Series gens_to_zero(const NilSeries& a);

struct NilMismatch {
    Mask mask;
    Mismatch where;
};

// First difference across components of nilpotent degree <= max_degree
// (negative: all degrees).
std::optional<NilMismatch> nil_first_difference(const NilSeries& a, const NilSeries& b,
                                                int max_degree);

std::string nil_to_text(const NilSeries& a);

// Symbolic prefactor prod_v v^(e_v) with affine nilpotent exponents e_v;
// exponents add under both multiplication and Hadamard pairing.
struct LogPrefactor {
    std::map<int, LinearNil> expo; // var index -> exponent

    bool operator==(const LogPrefactor& o) const;
};

LogPrefactor prefactor_add(const LogPrefactor& a, const LogPrefactor& b);
LogPrefactor prefactor_substitute_gen(const LogPrefactor& a, int gen, const LinearNil& expr,
                                      size_t ngens);
// var -> c * prod(target)^e on the prefactor ledger (the constant is ignored;
// it carries no exponent).
LogPrefactor prefactor_substitute_var(const LogPrefactor& a, int var, const Expo& target,
                                      size_t ngens);
bool prefactor_zero_at(const LogPrefactor& a, int var);
std::string prefactor_to_text(const LogPrefactor& a, const VarSet& vars, const NilGens& gens);

// An I-function: nilpotent-ring series together with its prefactor ledger.
struct IFun {
    NilSeries body;
    LogPrefactor pref;
};

} // namespace lgglue
