#include "lgglue/nilpotent.hpp"

#include <bit>
#include <sstream>

namespace lgglue {

namespace {

void require_compatible(const NilSeries& a, const NilSeries& b)
{
    if (!a.gens() || !b.gens() || !(*a.gens() == *b.gens()))
        throw lg_error(errc::gen_mismatch, "elements live over different generator sets");
    if (!a.vars() || !b.vars() || !(*a.vars() == *b.vars()) || !(a.trunc() == b.trunc()))
        throw lg_error(errc::var_mismatch, "elements have different variables or truncation");
}

} // namespace

NilGensPtr make_gens(std::vector<std::string> names)
{
    auto g = std::make_shared<NilGens>();
    g->names = std::move(names);
    if (g->size() > 20)
        throw lg_error(errc::invalid_data, "too many nilpotent generators");
    return g;
}

bool LinearNil::is_zero() const
{
    if (constant != 0)
        return false;
    for (const auto& c : coef)
        if (c != 0)
            return false;
    return true;
}

bool LinearNil::operator==(const LinearNil& o) const
{
    if (constant != o.constant)
        return false;
    size_t n = std::max(coef.size(), o.coef.size());
    for (size_t i = 0; i < n; ++i) {
        Rat a = i < coef.size() ? coef[i] : Rat(0);
        Rat b = i < o.coef.size() ? o.coef[i] : Rat(0);
        if (a != b)
            return false;
    }
    return true;
}

LinearNil linear_add(const LinearNil& a, const LinearNil& b)
{
    LinearNil r(std::max(a.coef.size(), b.coef.size()));
    r.constant = a.constant + b.constant;
    for (size_t i = 0; i < r.coef.size(); ++i) {
        if (i < a.coef.size())
            r.coef[i] += a.coef[i];
        if (i < b.coef.size())
            r.coef[i] += b.coef[i];
    }
    return r;
}

LinearNil linear_scale(const LinearNil& a, const Rat& c)
{
    LinearNil r = a;
    r.constant *= c;
    for (auto& x : r.coef)
        x *= c;
    return r;
}

void NilScalar::add(Mask m, const Rat& v)
{
    if (v == 0)
        return;
    auto it = c.find(m);
    if (it == c.end()) {
        c.emplace(m, v);
    } else {
        it->second += v;
        if (it->second == 0)
            c.erase(it);
    }
}

NilScalar scalar_one(size_t)
{
    NilScalar s;
    s.add(0, 1);
    return s;
}

NilScalar scalar_from_linear(const LinearNil& a)
{
    NilScalar s;
    s.add(0, a.constant);
    for (size_t i = 0; i < a.coef.size(); ++i)
        s.add(Mask(1) << i, a.coef[i]);
    return s;
}

NilScalar scalar_add(const NilScalar& a, const NilScalar& b)
{
    NilScalar r = a;
    for (const auto& [m, v] : b.c)
        r.add(m, v);
    return r;
}

NilScalar scalar_mul(const NilScalar& a, const NilScalar& b, size_t)
{
    NilScalar r;
    for (const auto& [ma, va] : a.c)
        for (const auto& [mb, vb] : b.c) {
            if (ma & mb)
                continue; // repeated generator annihilates the term
            r.add(ma | mb, va * vb);
        }
    return r;
}

NilScalar scalar_invert(const NilScalar& a, size_t ngens)
{
    Rat c0 = a.at(0);
    if (c0 == 0)
        throw lg_error(errc::not_unit, "generator-free part vanishes");
    // a = c0 (1 - m) with m nilpotent: 1/a = (1/c0) sum m^k.
    NilScalar m;
    for (const auto& [mk, v] : a.c)
        if (mk != 0)
            m.add(mk, -v / c0);
    NilScalar r = scalar_one(ngens);
    NilScalar pw = scalar_one(ngens);
    for (size_t k = 1; k <= ngens; ++k) {
        pw = scalar_mul(pw, m, ngens);
        if (pw.is_zero())
            break;
        r = scalar_add(r, pw);
    }
    NilScalar out;
    for (const auto& [mk, v] : r.c)
        out.add(mk, v / c0);
    return out;
}

NilScalar scalar_substitute(const NilScalar& a, int gen, const LinearNil& expr, size_t ngens)
{
    if (static_cast<size_t>(gen) < expr.coef.size() && expr.coef[gen] != 0)
        throw lg_error(errc::self_reference, "substitution expression mentions the generator");
    Mask gbit = Mask(1) << gen;
    NilScalar out;
    NilScalar value = scalar_from_linear(expr);
    for (const auto& [m, v] : a.c) {
        if (!(m & gbit)) {
            out.add(m, v);
            continue;
        }
        NilScalar rest;
        rest.add(m & ~gbit, v);
        NilScalar prod = scalar_mul(rest, value, ngens);
        for (const auto& [mm, vv] : prod.c)
            out.add(mm, vv);
    }
    return out;
}

NilSeries::NilSeries(NilGensPtr gens, VarSetPtr vars, Trunc trunc)
    : gens_(std::move(gens)), vars_(std::move(vars)), trunc_(std::move(trunc))
{
}

Series& NilSeries::component(Mask m)
{
    auto it = comp_.find(m);
    if (it == comp_.end())
        it = comp_.emplace(m, Series(vars_, trunc_)).first;
    return it->second;
}

const Series* NilSeries::find(Mask m) const
{
    auto it = comp_.find(m);
    return it == comp_.end() ? nullptr : &it->second;
}

void NilSeries::add_term(Mask m, const Expo& e, const Rat& c) { component(m).add_term(e, c); }

void NilSeries::set_component(Mask m, Series s)
{
    if (!(*s.vars() == *vars_) || !(s.trunc() == trunc_))
        throw lg_error(errc::var_mismatch, "component variables do not match the element");
    comp_.insert_or_assign(m, std::move(s));
}

void NilSeries::prune()
{
    for (auto it = comp_.begin(); it != comp_.end();) {
        if (it->second.is_zero())
            it = comp_.erase(it);
        else
            ++it;
    }
}

bool NilSeries::is_zero() const
{
    for (const auto& [m, s] : comp_)
        if (!s.is_zero())
            return false;
    return true;
}

NilSeries nil_from_series(NilGensPtr gens, const Series& s)
{
    NilSeries r(std::move(gens), s.vars(), s.trunc());
    r.set_component(0, s);
    return r;
}

NilSeries nil_const(NilGensPtr gens, VarSetPtr vars, Trunc trunc, const NilScalar& c)
{
    NilSeries r(std::move(gens), std::move(vars), std::move(trunc));
    for (const auto& [m, v] : c.c)
        r.add_term(m, Expo(r.vars()->size(), 0), v);
    return r;
}

NilSeries nil_add(const NilSeries& a, const NilSeries& b)
{
    require_compatible(a, b);
    NilSeries out = a;
    for (const auto& [m, s] : b.components()) {
        const Series* as = a.find(m);
        if (as)
            out.set_component(m, add(*as, s));
        else
            out.set_component(m, s);
    }
    out.prune();
    return out;
}

NilSeries nil_sub(const NilSeries& a, const NilSeries& b)
{
    return nil_add(a, nil_scale(b, Rat(-1)));
}

NilSeries nil_scale(const NilSeries& a, const Rat& c)
{
    NilSeries out(a.gens(), a.vars(), a.trunc());
    for (const auto& [m, s] : a.components())
        out.set_component(m, scale(s, c));
    out.prune();
    return out;
}

NilSeries nil_mul(const NilSeries& a, const NilSeries& b)
{
    require_compatible(a, b);
    NilSeries out(a.gens(), a.vars(), a.trunc());
    for (const auto& [ma, sa] : a.components()) {
        if (sa.is_zero())
            continue;
        for (const auto& [mb, sb] : b.components()) {
            if (ma & mb)
                continue;
            if (sb.is_zero())
                continue;
            Series prod = mul(sa, sb);
            const Series* cur = out.find(ma | mb);
            out.set_component(ma | mb, cur ? add(*cur, prod) : prod);
        }
    }
    out.prune();
    return out;
}

NilSeries nil_mul_scalar(const NilSeries& a, const NilScalar& c)
{
    NilSeries out(a.gens(), a.vars(), a.trunc());
    for (const auto& [ma, sa] : a.components())
        for (const auto& [mb, v] : c.c) {
            if (ma & mb)
                continue;
            Series prod = scale(sa, v);
            const Series* cur = out.find(ma | mb);
            out.set_component(ma | mb, cur ? add(*cur, prod) : prod);
        }
    out.prune();
    return out;
}

NilSeries nil_invert_unit(const NilSeries& a)
{
    const Series* c0s = a.find(0);
    Rat c0 = c0s ? c0s->coeff(Expo(a.vars()->size(), 0)) : Rat(0);
    if (c0 == 0)
        throw lg_error(errc::not_unit, "constant part vanishes");
    // a = c0 (1 - m) with m of positive nilpotent degree or positive
    // q-degree; the geometric series terminates by nilpotency + truncation.
    NilSeries m(a.gens(), a.vars(), a.trunc());
    Expo zero(a.vars()->size(), 0);
    for (const auto& [mk, s] : a.components()) {
        Series t = scale(s, Rat(-1) / c0);
        if (mk == 0)
            t.add_term(zero, 1); // 1 - a0/c0
        m.set_component(mk, t);
    }
    m.prune();
    NilSeries one(a.gens(), a.vars(), a.trunc());
    one.add_term(0, zero, 1);
    NilSeries r = one;
    NilSeries pw = one;
    size_t bound = a.gens()->size() + static_cast<size_t>(a.trunc().degree) + 1;
    for (size_t k = 1; k <= bound; ++k) {
        pw = nil_mul(pw, m);
        if (pw.is_zero())
            break;
        r = nil_add(r, pw);
    }
    return nil_scale(r, Rat(1) / c0);
}

NilSeries substitute_generator(const NilSeries& a, int gen, const LinearNil& expr)
{
    if (static_cast<size_t>(gen) < expr.coef.size() && expr.coef[gen] != 0)
        throw lg_error(errc::self_reference, "substitution expression mentions the generator");
    Mask gbit = Mask(1) << gen;
    NilSeries out(a.gens(), a.vars(), a.trunc());
    auto accumulate = [&](Mask m, const Series& s) {
        const Series* cur = out.find(m);
        out.set_component(m, cur ? add(*cur, s) : s);
    };
    for (const auto& [m, s] : a.components()) {
        if (!(m & gbit)) {
            accumulate(m, s);
            continue;
        }
        Mask base = m & ~gbit;
        if (expr.constant != 0)
            accumulate(base, scale(s, expr.constant));
        for (size_t h = 0; h < expr.coef.size(); ++h) {
            if (expr.coef[h] == 0)
                continue;
            Mask hbit = Mask(1) << h;
            if (base & hbit)
                continue; // repeated generator vanishes
            accumulate(base | hbit, scale(s, expr.coef[h]));
        }
    }
    out.prune();
    return out;
}

NilSeries nil_hadamard(const NilSeries& a, const NilSeries& b, const std::set<int>& star_vars)
{
    require_compatible(a, b);
    NilSeries out(a.gens(), a.vars(), a.trunc());
    for (const auto& [ma, sa] : a.components())
        for (const auto& [mb, sb] : b.components()) {
            if (ma & mb)
                continue;
            Series prod = hadamard(sa, sb, star_vars);
            const Series* cur = out.find(ma | mb);
            out.set_component(ma | mb, cur ? add(*cur, prod) : prod);
        }
    out.prune();
    return out;
}

NilSeries nil_residue(const NilSeries& a, int var)
{
    NilSeries out;
    bool first = true;
    for (const auto& [m, s] : a.components()) {
        Series r = residue(s, var);
        if (first) {
            out = NilSeries(a.gens(), r.vars(), r.trunc());
            first = false;
        }
        out.set_component(m, r);
    }
    if (first) {
        Series probe = residue(Series(a.vars(), a.trunc()), var);
        out = NilSeries(a.gens(), probe.vars(), probe.trunc());
    }
    out.prune();
    return out;
}

NilSeries nil_substitute_monomial(const NilSeries& a, int var, const Rat& c, const Expo& target)
{
    NilSeries out(a.gens(), a.vars(), a.trunc());
    for (const auto& [m, s] : a.components())
        out.set_component(m, substitute_monomial(s, var, c, target));
    out.prune();
    return out;
}

Series gens_to_zero(const NilSeries& a)
{
    const Series* s = a.find(0);
    return s ? *s : Series(a.vars(), a.trunc());
}

std::optional<NilMismatch> nil_first_difference(const NilSeries& a, const NilSeries& b,
                                                int max_degree)
{
    require_compatible(a, b);
    std::set<Mask> masks;
    for (const auto& [m, s] : a.components())
        masks.insert(m);
    for (const auto& [m, s] : b.components())
        masks.insert(m);
    Series empty(a.vars(), a.trunc());
    for (Mask m : masks) {
        if (max_degree >= 0 && std::popcount(m) > static_cast<unsigned>(max_degree))
            continue;
        const Series* sa = a.find(m);
        const Series* sb = b.find(m);
        auto d = first_difference(sa ? *sa : empty, sb ? *sb : empty);
        if (d)
            return NilMismatch{m, *d};
    }
    return std::nullopt;
}

std::string nil_to_text(const NilSeries& a)
{
    std::ostringstream os;
    for (const auto& [m, s] : a.components()) {
        os << '[';
        bool sp = false;
        for (size_t i = 0; i < a.gens()->size(); ++i)
            if (m & (Mask(1) << i)) {
                if (sp)
                    os << ' ';
                os << a.gens()->names[i];
                sp = true;
            }
        os << "]\n" << series_to_text(s);
    }
    return os.str();
}

bool LogPrefactor::operator==(const LogPrefactor& o) const
{
    auto nonzero = [](const std::map<int, LinearNil>& m) {
        std::map<int, LinearNil> r;
        for (const auto& [k, v] : m)
            if (!v.is_zero())
                r.emplace(k, v);
        return r;
    };
    auto a = nonzero(expo), b = nonzero(o.expo);
    if (a.size() != b.size())
        return false;
    for (const auto& [k, v] : a) {
        auto it = b.find(k);
        if (it == b.end() || !(it->second == v))
            return false;
    }
    return true;
}

LogPrefactor prefactor_add(const LogPrefactor& a, const LogPrefactor& b)
{
    LogPrefactor r = a;
    for (const auto& [v, e] : b.expo) {
        auto it = r.expo.find(v);
        if (it == r.expo.end())
            r.expo.emplace(v, e);
        else
            it->second = linear_add(it->second, e);
    }
    return r;
}

LogPrefactor prefactor_substitute_gen(const LogPrefactor& a, int gen, const LinearNil& expr,
                                      size_t ngens)
{
    if (static_cast<size_t>(gen) < expr.coef.size() && expr.coef[gen] != 0)
        throw lg_error(errc::self_reference, "substitution expression mentions the generator");
    LogPrefactor r;
    for (const auto& [v, e] : a.expo) {
        LinearNil ne(ngens);
        ne.constant = e.constant;
        for (size_t i = 0; i < e.coef.size(); ++i) {
            if (e.coef[i] == 0)
                continue;
            if (static_cast<int>(i) == gen)
                ne = linear_add(ne, linear_scale(expr, e.coef[i]));
            else
                ne.coef[i] += e.coef[i];
        }
        if (!ne.is_zero())
            r.expo.emplace(v, ne);
    }
    return r;
}

LogPrefactor prefactor_substitute_var(const LogPrefactor& a, int var, const Expo& target, size_t)
{
    LogPrefactor r;
    for (const auto& [v, e] : a.expo) {
        if (v == var)
            continue;
        auto it = r.expo.find(v);
        if (it == r.expo.end())
            r.expo.emplace(v, e);
        else
            it->second = linear_add(it->second, e);
    }
    auto it = a.expo.find(var);
    if (it != a.expo.end() && !it->second.is_zero()) {
        for (size_t w = 0; w < target.size(); ++w) {
            if (target[w] == 0)
                continue;
            LinearNil contrib = linear_scale(it->second, Rat(target[w]));
            auto jt = r.expo.find(static_cast<int>(w));
            if (jt == r.expo.end())
                r.expo.emplace(static_cast<int>(w), contrib);
            else
                jt->second = linear_add(jt->second, contrib);
        }
    }
    return r;
}

bool prefactor_zero_at(const LogPrefactor& a, int var)
{
    auto it = a.expo.find(var);
    return it == a.expo.end() || it->second.is_zero();
}

std::string prefactor_to_text(const LogPrefactor& a, const VarSet& vars, const NilGens& gens)
{
    std::ostringstream os;
    bool any = false;
    for (const auto& [v, e] : a.expo) {
        if (e.is_zero())
            continue;
        if (any)
            os << " * ";
        any = true;
        os << vars.names[v] << "^(";
        bool plus = false;
        if (e.constant != 0) {
            os << rat_str(e.constant);
            plus = true;
        }
        for (size_t i = 0; i < e.coef.size(); ++i) {
            if (e.coef[i] == 0)
                continue;
            if (plus)
                os << " + ";
            os << rat_str(e.coef[i]) << '*' << gens.names[i];
            plus = true;
        }
        os << ')';
    }
    if (!any)
        return "1";
    return os.str();
}

} // namespace lgglue
