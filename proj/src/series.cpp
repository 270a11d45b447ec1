#include "lgglue/series.hpp"

#include <algorithm>
#include <sstream>

namespace lgglue {

namespace {

int sat_add(int a, int b)
{
    if (a >= comp_pos_inf || b >= comp_pos_inf)
        return comp_pos_inf;
    if (a <= comp_neg_inf || b <= comp_neg_inf)
        return comp_neg_inf;
    long s = static_cast<long>(a) + b;
    if (s >= comp_pos_inf)
        return comp_pos_inf;
    if (s <= comp_neg_inf)
        return comp_neg_inf;
    return static_cast<int>(s);
}

void require_compatible(const Series& a, const Series& b)
{
    if (!a.vars() || !b.vars() || !(*a.vars() == *b.vars()) || !(a.trunc() == b.trunc()))
        throw lg_error(errc::var_mismatch, "series have different variables or truncation");
}

int power_degree(const VarSet& vs, const Expo& e)
{
    int d = 0;
    for (size_t i = 0; i < vs.size(); ++i)
        if (vs.kinds[i] == VarKind::power)
            d += e[i];
    return d;
}

// sup/inf of the true support of `a` in variable v, as far as certified.
// Returns comp_pos_inf / comp_neg_inf when unknown beyond the window.
int support_hi(const Series& a, int v)
{
    if (a.comp_hi(v) < comp_pos_inf)
        return comp_pos_inf; // unknown above comp_hi
    int m = comp_neg_inf; // empty series: no positive support
    for (const auto& [e, c] : a.terms())
        m = std::max(m, e[v]);
    return m;
}

int support_lo(const Series& a, int v)
{
    if (a.comp_lo(v) > comp_neg_inf)
        return comp_neg_inf;
    int m = comp_pos_inf;
    for (const auto& [e, c] : a.terms())
        m = std::min(m, e[v]);
    return m;
}

} // namespace

VarSetPtr make_varset(std::vector<std::pair<std::string, VarKind>> vars)
{
    auto vs = std::make_shared<VarSet>();
    for (auto& [n, k] : vars) {
        if (vs->index_of(n) >= 0)
            throw lg_error(errc::invalid_data, "duplicate variable '" + n + "'");
        vs->names.push_back(n);
        vs->kinds.push_back(k);
    }
    return vs;
}

VarSetPtr varset_without(const VarSetPtr& vs, int idx)
{
    auto out = std::make_shared<VarSet>();
    for (size_t i = 0; i < vs->size(); ++i) {
        if (static_cast<int>(i) == idx)
            continue;
        out->names.push_back(vs->names[i]);
        out->kinds.push_back(vs->kinds[i]);
    }
    return out;
}

Series::Series(VarSetPtr vars, Trunc trunc) : vars_(std::move(vars)), trunc_(std::move(trunc))
{
    if (trunc_.window.size() != vars_->size())
        throw lg_error(errc::invalid_data, "truncation window count does not match variables");
    comp_lo_.assign(vars_->size(), comp_neg_inf);
    comp_hi_.assign(vars_->size(), comp_pos_inf);
}

bool Series::in_box(const Expo& e) const
{
    int deg = 0;
    for (size_t i = 0; i < vars_->size(); ++i) {
        if (vars_->kinds[i] == VarKind::power) {
            if (e[i] < 0)
                return false;
            deg += e[i];
        } else {
            if (e[i] > trunc_.window[i] || e[i] < -trunc_.window[i])
                return false;
        }
    }
    return deg <= trunc_.degree;
}

bool Series::add_term(const Expo& e, const Rat& c)
{
    Rat cc = c;
    cc.canonicalize(); // GMP comparisons are undefined on non-canonical values
    if (cc == 0)
        return true;
    if (!in_box(e))
        return false;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, cc);
    } else {
        it->second += cc;
        if (it->second == 0)
            terms_.erase(it);
    }
    return true;
}

Rat Series::coeff(const Expo& e) const
{
    auto it = terms_.find(e);
    return it == terms_.end() ? Rat(0) : it->second;
}

void Series::set_comp(int var, int lo, int hi)
{
    comp_lo_[var] = lo;
    comp_hi_[var] = hi;
}

void Series::intersect_comp(int var, int lo, int hi)
{
    comp_lo_[var] = std::max(comp_lo_[var], lo);
    comp_hi_[var] = std::min(comp_hi_[var], hi);
}

void Series::clamp_comp_to_window(int var)
{
    intersect_comp(var, -trunc_.window[var], trunc_.window[var]);
}

Series series_zero(VarSetPtr vars, Trunc trunc) { return Series(std::move(vars), std::move(trunc)); }

Series series_const(VarSetPtr vars, Trunc trunc, const Rat& c)
{
    Series s(std::move(vars), std::move(trunc));
    s.add_term(Expo(s.vars()->size(), 0), c);
    return s;
}

Series series_monomial(VarSetPtr vars, Trunc trunc, const Rat& c, const Expo& e)
{
    Series s(std::move(vars), std::move(trunc));
    if (!s.add_term(e, c))
        throw lg_error(errc::window_overflow, "monomial outside truncation box");
    return s;
}

Series add(const Series& a, const Series& b)
{
    require_compatible(a, b);
    Series out = a;
    for (const auto& [e, c] : b.terms())
        out.add_term(e, c);
    for (size_t v = 0; v < a.vars()->size(); ++v)
        out.intersect_comp(static_cast<int>(v), b.comp_lo(static_cast<int>(v)),
                           b.comp_hi(static_cast<int>(v)));
    return out;
}

Series sub(const Series& a, const Series& b) { return add(a, neg(b)); }

Series neg(const Series& a) { return scale(a, Rat(-1)); }

Series scale(const Series& a, const Rat& c)
{
    Series out(a.vars(), a.trunc());
    for (size_t v = 0; v < a.vars()->size(); ++v)
        out.set_comp(static_cast<int>(v), a.comp_lo(static_cast<int>(v)),
                     a.comp_hi(static_cast<int>(v)));
    if (c == 0)
        return out;
    for (const auto& [e, k] : a.terms())
        out.add_term(e, k * c);
    return out;
}

namespace {

// Completeness propagation for products: the result is certified at exponent
// g in v only if no true term of one factor outside its certified interval
// can pair with a true term of the other to land at g.
void propagate_product_comp(const Series& a, const Series& b, Series& out,
                            const std::vector<bool>& dropped_hi, const std::vector<bool>& dropped_lo)
{
    const VarSet& vs = *a.vars();
    for (size_t vi = 0; vi < vs.size(); ++vi) {
        int v = static_cast<int>(vi);
        if (vs.kinds[vi] == VarKind::power) {
            out.set_comp(v, comp_neg_inf, comp_pos_inf);
            continue;
        }
        auto upper = [&](const Series& x, const Series& y) {
            if (x.comp_hi(v) >= comp_pos_inf)
                return comp_pos_inf;
            int slo = support_lo(y, v);
            if (slo >= comp_pos_inf)
                return comp_pos_inf; // y empty: nothing to pair with
            return sat_add(x.comp_hi(v), slo);
        };
        auto lower = [&](const Series& x, const Series& y) {
            if (x.comp_lo(v) <= comp_neg_inf)
                return comp_neg_inf;
            int shi = support_hi(y, v);
            if (shi <= comp_neg_inf)
                return comp_neg_inf;
            return sat_add(x.comp_lo(v), shi);
        };
        int hi = std::min(upper(a, b), upper(b, a));
        int lo = std::max(lower(a, b), lower(b, a));
        if (dropped_hi[vi])
            hi = std::min(hi, out.trunc().window[vi]);
        if (dropped_lo[vi])
            lo = std::max(lo, -out.trunc().window[vi]);
        out.set_comp(v, lo, hi);
    }
}

} // namespace

Series mul(const Series& a, const Series& b)
{
    require_compatible(a, b);
    Series out(a.vars(), a.trunc());
    const size_t n = a.vars()->size();
    std::vector<bool> dropped_hi(n, false), dropped_lo(n, false);
    Expo e(n, 0);
    for (const auto& [ea, ca] : a.terms()) {
        for (const auto& [eb, cb] : b.terms()) {
            bool power_ok = true;
            int deg = 0;
            for (size_t i = 0; i < n; ++i) {
                e[i] = ea[i] + eb[i];
                if (a.vars()->kinds[i] == VarKind::power)
                    deg += e[i];
            }
            power_ok = deg <= a.trunc().degree;
            if (!power_ok)
                continue; // sound truncation: power degrees never decrease
            bool in_window = true;
            for (size_t i = 0; i < n; ++i) {
                if (a.vars()->kinds[i] != VarKind::laurent)
                    continue;
                if (e[i] > a.trunc().window[i]) {
                    dropped_hi[i] = true;
                    in_window = false;
                } else if (e[i] < -a.trunc().window[i]) {
                    dropped_lo[i] = true;
                    in_window = false;
                }
            }
            if (in_window)
                out.add_term(e, ca * cb);
        }
    }
    propagate_product_comp(a, b, out, dropped_hi, dropped_lo);
    return out;
}

Series hadamard(const Series& a, const Series& b, const std::set<int>& star_vars)
{
    require_compatible(a, b);
    if (star_vars.empty())
        throw lg_error(errc::var_mismatch, "hadamard product needs a nonempty star set");
    const size_t n = a.vars()->size();
    for (int v : star_vars)
        if (v < 0 || v >= static_cast<int>(n))
            throw lg_error(errc::var_mismatch, "star variable index out of range");

    // Bucket b by the starred exponent projection.
    auto project = [&](const Expo& e) {
        Expo p;
        p.reserve(star_vars.size());
        for (int v : star_vars)
            p.push_back(e[v]);
        return p;
    };
    std::map<Expo, std::vector<const std::pair<const Expo, Rat>*>> buckets;
    for (const auto& term : b.terms())
        buckets[project(term.first)].push_back(&term);

    Series out(a.vars(), a.trunc());
    std::vector<bool> dropped_hi(n, false), dropped_lo(n, false);
    Expo e(n, 0);
    for (const auto& [ea, ca] : a.terms()) {
        auto it = buckets.find(project(ea));
        if (it == buckets.end())
            continue;
        for (const auto* bt : it->second) {
            const Expo& eb = bt->first;
            int deg = 0;
            for (size_t i = 0; i < n; ++i) {
                e[i] = star_vars.count(static_cast<int>(i)) ? ea[i] : ea[i] + eb[i];
                if (a.vars()->kinds[i] == VarKind::power)
                    deg += e[i];
            }
            if (deg > a.trunc().degree)
                continue;
            bool in_window = true;
            for (size_t i = 0; i < n; ++i) {
                if (a.vars()->kinds[i] != VarKind::laurent)
                    continue;
                if (e[i] > a.trunc().window[i]) {
                    dropped_hi[i] = true;
                    in_window = false;
                } else if (e[i] < -a.trunc().window[i]) {
                    dropped_lo[i] = true;
                    in_window = false;
                }
            }
            if (in_window)
                out.add_term(e, ca * bt->second);
        }
    }
    propagate_product_comp(a, b, out, dropped_hi, dropped_lo);
    // Starred exponents are matched, not added: completeness intersects.
    for (int v : star_vars) {
        if (a.vars()->kinds[v] != VarKind::laurent)
            continue;
        out.set_comp(v, std::max(a.comp_lo(v), b.comp_lo(v)), std::min(a.comp_hi(v), b.comp_hi(v)));
    }
    return out;
}

Series residue(const Series& a, int var)
{
    if (var < 0 || var >= static_cast<int>(a.vars()->size()))
        throw lg_error(errc::var_mismatch, "residue variable index out of range");
    if (a.vars()->kinds[var] != VarKind::laurent)
        throw lg_error(errc::not_laurent,
                       "residue in POWER variable '" + a.vars()->names[var] + "'");
    if (a.comp_lo(var) > 0 || a.comp_hi(var) < 0)
        throw lg_error(errc::window_overflow,
                       "residue in '" + a.vars()->names[var] +
                           "' is not certified at exponent zero; enlarge the window");

    VarSetPtr nv = varset_without(a.vars(), var);
    Trunc nt;
    nt.degree = a.trunc().degree;
    for (size_t i = 0; i < a.vars()->size(); ++i)
        if (static_cast<int>(i) != var)
            nt.window.push_back(a.trunc().window[i]);
    Series out(nv, nt);
    Expo e;
    for (const auto& [ea, c] : a.terms()) {
        if (ea[var] != 0)
            continue;
        e.clear();
        for (size_t i = 0; i < ea.size(); ++i)
            if (static_cast<int>(i) != var)
                e.push_back(ea[i]);
        out.add_term(e, c);
    }
    int k = 0;
    for (size_t i = 0; i < a.vars()->size(); ++i) {
        if (static_cast<int>(i) == var)
            continue;
        out.set_comp(k, a.comp_lo(static_cast<int>(i)), a.comp_hi(static_cast<int>(i)));
        ++k;
    }
    return out;
}

Series expand_inverse_binomial(VarSetPtr vars, Trunc trunc, const Rat& c, const Expo& m, long k)
{
    bool unit = true;
    for (int e : m)
        if (e != 0)
            unit = false;
    if (unit)
        throw lg_error(errc::not_small, "expansion direction is the unit monomial");
    if (c == 0)
        throw lg_error(errc::invalid_data, "zero coefficient in inverse binomial");

    // Terms (d+k choose k) c^d m^d; enumeration stops once m^d leaves the box
    // permanently (power degree grows) or the window is exhausted.
    int pdeg = 0;
    for (size_t i = 0; i < vars->size(); ++i)
        if (vars->kinds[i] == VarKind::power) {
            if (m[i] < 0)
                throw lg_error(errc::not_small, "negative POWER exponent in expansion direction");
            pdeg += m[i];
        }
    long dmax;
    if (pdeg > 0) {
        dmax = trunc.degree / pdeg;
    } else {
        dmax = -1;
        for (size_t i = 0; i < vars->size(); ++i) {
            if (vars->kinds[i] == VarKind::laurent && m[i] != 0) {
                long lim = trunc.window[i] / std::abs(m[i]);
                dmax = dmax < 0 ? lim : std::min(dmax, lim);
            }
        }
        if (dmax < 0)
            throw lg_error(errc::not_small, "expansion direction does not move any exponent");
    }

    Series out(vars, trunc);
    Expo e(vars->size(), 0);
    Rat coeff(1);
    Int binom(1);
    for (long d = 0; d <= dmax; ++d) {
        out.add_term(e, Rat(binom) * coeff);
        for (size_t i = 0; i < vars->size(); ++i)
            e[i] += m[i];
        coeff *= c;
        binom = binom * Int(d + 1 + k) / Int(d + 1);
    }
    // Certification: with positive power drift the enumeration is complete in
    // every window; with pure Laurent drift the cut direction stays clamped.
    for (size_t i = 0; i < vars->size(); ++i) {
        if (vars->kinds[i] != VarKind::laurent)
            continue;
        int v = static_cast<int>(i);
        if (pdeg > 0) {
            long reach = static_cast<long>(dmax) * std::abs(m[i]);
            if (reach <= trunc.window[i])
                continue; // fully certified
        }
        out.clamp_comp_to_window(v);
    }
    return out;
}

Series substitute_monomial(const Series& a, int var, const Rat& c, const Expo& target)
{
    if (var < 0 || var >= static_cast<int>(a.vars()->size()))
        throw lg_error(errc::var_mismatch, "substitution variable index out of range");
    if (target[var] != 0)
        throw lg_error(errc::bad_substitution, "substitution target mentions the variable itself");
    if (c == 0)
        throw lg_error(errc::bad_substitution, "substitution by zero");

    Series out(a.vars(), a.trunc());
    const size_t n = a.vars()->size();
    Expo e(n, 0);
    bool dropped = false;
    for (const auto& [ea, k] : a.terms()) {
        int ev = ea[var];
        for (size_t i = 0; i < n; ++i)
            e[i] = (static_cast<int>(i) == var) ? 0 : ea[i] + ev * target[i];
        if (!out.add_term(e, k * rat_pow(c, ev)))
            dropped = true;
    }
    // Conservative completeness: variables moved by the substitution keep a
    // certificate only when the source variable was fully certified and no
    // term fell out of the box.
    bool var_certified = a.vars()->kinds[var] == VarKind::power ||
                         (a.comp_lo(var) <= comp_neg_inf && a.comp_hi(var) >= comp_pos_inf);
    for (size_t i = 0; i < n; ++i) {
        int v = static_cast<int>(i);
        if (a.vars()->kinds[i] != VarKind::laurent)
            continue;
        if (v == var) {
            out.set_comp(v, comp_neg_inf, comp_pos_inf);
            continue;
        }
        if (target[i] == 0) {
            out.set_comp(v, a.comp_lo(v), a.comp_hi(v));
            continue;
        }
        bool self_certified = a.comp_lo(v) <= comp_neg_inf && a.comp_hi(v) >= comp_pos_inf;
        if (var_certified && self_certified && !dropped)
            out.set_comp(v, comp_neg_inf, comp_pos_inf);
        else if (var_certified && self_certified)
            out.set_comp(v, -a.trunc().window[i], a.trunc().window[i]);
        else
            throw lg_error(errc::window_overflow,
                           "monomial substitution into a window-truncated variable");
    }
    return out;
}

Series embed_into(const Series& a, VarSetPtr target, const Trunc& target_trunc)
{
    std::vector<int> where(a.vars()->size(), -1);
    for (size_t i = 0; i < a.vars()->size(); ++i) {
        int j = target->index_of(a.vars()->names[i]);
        if (j < 0 || target->kinds[j] != a.vars()->kinds[i])
            throw lg_error(errc::var_mismatch,
                           "variable '" + a.vars()->names[i] + "' missing from target set");
        where[i] = j;
    }
    if (target_trunc.degree < a.trunc().degree)
        throw lg_error(errc::var_mismatch, "target truncation is tighter than the source");
    Series out(target, target_trunc);
    Expo e(target->size(), 0);
    for (const auto& [ea, c] : a.terms()) {
        std::fill(e.begin(), e.end(), 0);
        for (size_t i = 0; i < ea.size(); ++i)
            e[where[i]] = ea[i];
        if (!out.add_term(e, c))
            throw lg_error(errc::window_overflow, "embedding left the truncation box");
    }
    for (size_t j = 0; j < target->size(); ++j)
        out.set_comp(static_cast<int>(j), comp_neg_inf, comp_pos_inf);
    for (size_t i = 0; i < a.vars()->size(); ++i)
        out.set_comp(where[i], a.comp_lo(static_cast<int>(i)), a.comp_hi(static_cast<int>(i)));
    return out;
}

Series collapse_var(const Series& a, int var)
{
    if (a.vars()->kinds[var] != VarKind::laurent)
        throw lg_error(errc::not_laurent, "can only collapse a Laurent variable");
    if (a.comp_lo(var) > comp_neg_inf || a.comp_hi(var) < comp_pos_inf)
        throw lg_error(errc::window_overflow,
                       "collapse of '" + a.vars()->names[var] + "' needs full certification");
    VarSetPtr nv = varset_without(a.vars(), var);
    Trunc nt;
    nt.degree = a.trunc().degree;
    for (size_t i = 0; i < a.vars()->size(); ++i)
        if (static_cast<int>(i) != var)
            nt.window.push_back(a.trunc().window[i]);
    Series out(nv, nt);
    Expo e;
    for (const auto& [ea, c] : a.terms()) {
        e.clear();
        for (size_t i = 0; i < ea.size(); ++i)
            if (static_cast<int>(i) != var)
                e.push_back(ea[i]);
        out.add_term(e, c);
    }
    int k = 0;
    for (size_t i = 0; i < a.vars()->size(); ++i) {
        if (static_cast<int>(i) == var)
            continue;
        out.set_comp(k, a.comp_lo(static_cast<int>(i)), a.comp_hi(static_cast<int>(i)));
        ++k;
    }
    return out;
}

std::optional<Mismatch> first_difference(const Series& a, const Series& b)
{
    require_compatible(a, b);
    auto in_joint = [&](const Expo& e) {
        for (size_t i = 0; i < e.size(); ++i) {
            if (a.vars()->kinds[i] != VarKind::laurent)
                continue;
            int v = static_cast<int>(i);
            int lo = std::max(a.comp_lo(v), b.comp_lo(v));
            int hi = std::min(a.comp_hi(v), b.comp_hi(v));
            if (e[i] < lo || e[i] > hi)
                return false;
        }
        return true;
    };
    std::set<Expo> keys;
    for (const auto& [e, c] : a.terms())
        keys.insert(e);
    for (const auto& [e, c] : b.terms())
        keys.insert(e);
    for (const auto& e : keys) {
        Rat ca = a.coeff(e), cb = b.coeff(e);
        if (!in_joint(e)) {
            if (ca != cb)
                throw lg_error(errc::window_overflow,
                               "differing term outside the jointly certified region");
            continue;
        }
        if (ca != cb)
            return Mismatch{e, ca, cb};
    }
    return std::nullopt;
}

std::string series_to_text(const Series& a)
{
    std::ostringstream os;
    for (const auto& [e, c] : a.terms()) {
        for (size_t i = 0; i < e.size(); ++i)
            os << e[i] << ' ';
        os << rat_str(c) << '\n';
    }
    return os.str();
}

Series series_from_text(VarSetPtr vars, Trunc trunc, const std::string& text)
{
    Series out(std::move(vars), std::move(trunc));
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        Expo e(out.vars()->size(), 0);
        for (size_t i = 0; i < e.size(); ++i)
            if (!(ls >> e[i]))
                throw lg_error(errc::config_parse, "bad exponent line '" + line + "'");
        std::string rat;
        if (!(ls >> rat))
            throw lg_error(errc::config_parse, "missing coefficient in '" + line + "'");
        if (!out.add_term(e, rat_parse(rat)))
            throw lg_error(errc::window_overflow, "term outside the truncation box: '" + line + "'");
    }
    return out;
}

} // namespace lgglue
