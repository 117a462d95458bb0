#include "approx.hpp"

#include <cmath>

namespace lyapsyn {

Expr ApproxScheme::series(const Expr& x) const {
    Expr acc;
    switch (kind) {
        case FuncKind::Exp:
            for (int n = 0; n <= order; ++n)
                acc = acc + x.pow(n).scaled(Rational(1, factorial(n)));
            break;
        case FuncKind::Sin:
            for (int n = 0; n <= order; ++n) {
                Rational c(1, factorial(2 * n + 1));
                if (n % 2 == 1) c = -c;
                acc = acc + x.pow(2 * n + 1).scaled(c);
            }
            break;
        case FuncKind::Arctan:
            for (int n = 0; n <= order; ++n) {
                Rational c(1, 2 * n + 1);
                if (n % 2 == 1) c = -c;
                acc = acc + x.pow(2 * n + 1).scaled(c);
            }
            break;
        default:
            throw ApproxError("no builtin scheme for abs");
    }
    return acc;
}

Expr ApproxScheme::bound(const Expr& x) const {
    Expr ax = Expr::func(FuncKind::Abs, x);
    switch (kind) {
        case FuncKind::Exp:
            return ax.pow(order + 1).scaled(Rational(2, factorial(order + 1)));
        case FuncKind::Sin:
            if (flags.tight_sin_bound)
                return ax.pow(2 * order + 2).scaled(Rational(1, factorial(2 * order + 2)));
            return ax.pow(order + 1).scaled(Rational(1, factorial(order + 1)));
        case FuncKind::Arctan:
            if (flags.paper_arctan_bound)
                return ax.pow(2 * order + 3).scaled(Rational(1, 2 * (2 * order + 3)));
            return ax.pow(2 * order + 3).scaled(Rational(1, 2 * order + 3));
        default:
            throw ApproxError("no builtin scheme for abs");
    }
}

std::optional<Rational> ApproxScheme::validity_radius() const {
    switch (kind) {
        case FuncKind::Exp: return Rational(2 + order, 2);  // 1 + N/2
        case FuncKind::Arctan: return Rational(1);
        case FuncKind::Sin: return std::nullopt;
        default: throw ApproxError("no builtin scheme for abs");
    }
}

int ApproxScheme::minimal_order(FuncKind kind, const Rational& abs_sup) {
    if (kind == FuncKind::Exp) {
        // smallest N with abs_sup <= 1 + N/2
        Rational need = (abs_sup - 1) * 2;
        if (need <= 0) return 0;
        BigInt fl = rat_num(need) / rat_den(need);
        int n = fl.convert_to<int>();
        if (Rational(n) < need) ++n;
        return n;
    }
    return 0;
}

std::string ApproxScheme::describe_validity() const {
    switch (kind) {
        case FuncKind::Exp: return "|x| <= " + rat_str(*validity_radius());
        case FuncKind::Arctan: return "|x| <= 1";
        case FuncKind::Sin:
            return flags.tight_sin_bound ? "all x (Lagrange form)" : "checked by sampling on the domain";
        default: return "";
    }
}

ApproxScheme builtin_scheme(FuncKind kind, int order, const ApproxFlags& flags) {
    if (kind == FuncKind::Abs) throw ApproxError("no builtin scheme for abs");
    if (order < 0) throw ApproxError("approximation order must be nonnegative");
    return ApproxScheme{kind, order, flags};
}

namespace {

void check_sin_bound_by_sampling(const ApproxScheme& scheme, const std::string& var, const Interval& iv) {
    Expr x = Expr::var(var);
    Expr ser = scheme.series(x);
    Expr bnd = scheme.bound(x);
    long double lo = rat_to_ld(iv.lo->value), hi = rat_to_ld(iv.hi->value);
    const int kSamples = 2048;
    for (int i = 0; i <= kSamples; ++i) {
        long double t = lo + (hi - lo) * (long double)i / kSamples;
        FloatPoint pt{{var, t}};
        long double err = fabsl(sinl(t) - ser.eval_float(pt));
        long double allowed = bnd.eval_float(pt) + 1e-12L;
        if (err > allowed)
            throw ApproxError("sin remainder bound refuted by sampling on the domain of '" + var +
                              "' (N=" + std::to_string(scheme.order) + ", x=" + std::to_string((double)t) +
                              "); increase the sin order");
    }
}

struct RelaxCtx {
    const std::map<FuncKind, int>& orders;
    const Box& domain;
    const ApproxFlags& flags;
    int next_id;
    std::map<std::string, int> shared;  // (kind,arg,N) key -> eps id
    std::vector<EpsBound> eps_bounds;
    std::map<int, RelaxEntry> table;
};

int scheme_order(RelaxCtx& ctx, FuncKind kind, const Rational& abs_sup) {
    auto it = ctx.orders.find(kind);
    if (it != ctx.orders.end()) return it->second;
    return ApproxScheme::minimal_order(kind, abs_sup);
}

Expr relax_expr(const Expr& e, RelaxCtx& ctx);

Expr relax_factor(const Factor& f, RelaxCtx& ctx) {
    if (!f.is_func) return Expr::symbol(f.sym, f.symkind);
    if (f.func == FuncKind::Abs) return Expr::func(FuncKind::Abs, relax_expr(*f.arg, ctx));

    const Expr& arg = *f.arg;
    const auto& ts = arg.terms();
    bool single_var = ts.size() == 1 && ts[0].coef == 1 && ts[0].factors.size() == 1 &&
                      ts[0].factors[0].second == 1 && !ts[0].factors[0].first.is_func &&
                      ts[0].factors[0].first.symkind == SymKind::Var;
    if (!single_var)
        throw ApproxError(std::string(func_name(f.func)) + "(" + arg.str() +
                          "): transcendental arguments must be single state variables");
    const std::string& var = ts[0].factors[0].first.sym;
    const Interval* iv = ctx.domain.find(var);
    if (!iv || !iv->bounded())
        throw ApproxError(std::string(func_name(f.func)) + "(" + var + "): argument variable '" + var +
                          "' has no bounded domain interval, remainder bound cannot be validated");
    Rational sup = iv->abs_sup();
    int order = scheme_order(ctx, f.func, sup);
    ApproxScheme scheme = builtin_scheme(f.func, order, ctx.flags);
    if (auto radius = scheme.validity_radius(); radius && sup > *radius) {
        std::string msg = std::string(func_name(f.func)) + "(" + var + "): domain closure gives sup|" + var +
                          "| = " + rat_str(sup) + " outside the validity region " + scheme.describe_validity();
        if (f.func == FuncKind::Exp)
            msg += "; minimal admissible order is N = " +
                   std::to_string(ApproxScheme::minimal_order(f.func, sup));
        throw ApproxError(msg);
    }
    if (f.func == FuncKind::Sin && !ctx.flags.tight_sin_bound) check_sin_bound_by_sampling(scheme, var, *iv);

    std::string key = std::string(func_name(f.func)) + "|" + var + "|" + std::to_string(order);
    int id;
    auto it = ctx.shared.find(key);
    if (it != ctx.shared.end()) {
        id = it->second;
    } else {
        id = ctx.next_id++;
        ctx.shared.emplace(key, id);
        Expr x = Expr::var(var);
        ctx.eps_bounds.push_back({id, scheme.bound(x), x});
        ctx.table.emplace(id, RelaxEntry{f.func, x, order});
    }
    Expr x = Expr::var(var);
    return scheme.series(x) + Expr::eps(id);
}

Expr relax_expr(const Expr& e, RelaxCtx& ctx) {
    Expr acc;
    for (const auto& t : e.terms()) {
        Expr part = Expr::constant(t.coef);
        for (const auto& [f, ex] : t.factors) part = part * relax_factor(f, ctx).pow(ex);
        acc = acc + part;
    }
    return acc;
}

}  // namespace

Relaxation relax(const Expr& e, const std::map<FuncKind, int>& orders, const Box& domain,
                 const ApproxFlags& flags, int eps_id_base) {
    RelaxCtx ctx{orders, domain, flags, eps_id_base, {}, {}, {}};
    Relaxation out;
    out.rewritten = relax_expr(e, ctx);
    out.eps_bounds = std::move(ctx.eps_bounds);
    out.table = std::move(ctx.table);
    if (out.rewritten.contains_transcendental())
        throw ApproxError("internal: relaxation left a transcendental node");
    return out;
}

}  // namespace lyapsyn
