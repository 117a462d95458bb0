#include "nrasolve/simplex.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace nra {

namespace {

Rel mirror(Rel r) {
    switch (r) {
        case Rel::LT: return Rel::GT;
        case Rel::GT: return Rel::LT;
        case Rel::LE: return Rel::GE;
        case Rel::GE: return Rel::LE;
        default: return r;
    }
}

// a + b*delta for an infinitesimal positive delta.
struct QDelta {
    Rational a{0}, b{0};
    bool operator<(const QDelta& o) const { return a < o.a || (a == o.a && b < o.b); }
    bool operator>(const QDelta& o) const { return o < *this; }
    bool operator==(const QDelta& o) const { return a == o.a && b == o.b; }
    bool operator<=(const QDelta& o) const { return !(o < *this); }
    bool operator>=(const QDelta& o) const { return !(*this < o); }
    QDelta operator+(const QDelta& o) const { return {a + o.a, b + o.b}; }
    QDelta operator-(const QDelta& o) const { return {a - o.a, b - o.b}; }
    QDelta scaled(const Rational& k) const { return {a * k, b * k}; }
};

struct Tableau {
    // Variable indices: 0..nstruct-1 structural, then slacks.
    int nvars = 0;
    std::vector<std::optional<QDelta>> lower, upper;
    std::vector<QDelta> value;
    std::vector<int> basic_row;               // var -> row index or -1
    std::vector<int> row_owner;               // row -> basic var
    std::vector<std::map<int, Rational>> rows;  // row: owner = sum coef * nonbasic

    int add_var() {
        lower.push_back(std::nullopt);
        upper.push_back(std::nullopt);
        value.push_back({});
        basic_row.push_back(-1);
        return nvars++;
    }

    bool can_increase(int x) const { return !upper[x] || value[x] < *upper[x]; }
    bool can_decrease(int x) const { return !lower[x] || value[x] > *lower[x]; }

    void update_nonbasic(int x, const QDelta& v) {
        QDelta diff = v - value[x];
        for (size_t r = 0; r < rows.size(); ++r) {
            auto it = rows[r].find(x);
            if (it != rows[r].end()) value[row_owner[r]] = value[row_owner[r]] + diff.scaled(it->second);
        }
        value[x] = v;
    }

    void pivot(int xb, int xn, const QDelta& vb) {
        int r = basic_row[xb];
        auto& row = rows[r];
        Rational axn = row.at(xn);
        QDelta theta = (vb - value[xb]).scaled(Rational(1) / axn);
        value[xb] = vb;
        value[xn] = value[xn] + theta;
        // Rewrite the row: xn = (xb - sum_{j != n} a_j x_j) / a_n
        std::map<int, Rational> newrow;
        newrow[xb] = Rational(1) / axn;
        for (const auto& [j, aj] : row)
            if (j != xn) newrow[j] = Rational(-aj / axn);
        rows[r] = newrow;
        row_owner[r] = xn;
        basic_row[xn] = r;
        basic_row[xb] = -1;
        // Substitute xn out of the other rows and refresh their values.
        for (size_t rr = 0; rr < rows.size(); ++rr) {
            if ((int)rr == r) continue;
            auto it = rows[rr].find(xn);
            if (it == rows[rr].end()) continue;
            Rational k = it->second;
            rows[rr].erase(it);
            for (const auto& [j, aj] : rows[r]) {
                Rational& slot = rows[rr][j];
                slot += k * aj;
                if (slot == 0) rows[rr].erase(j);
            }
            value[row_owner[rr]] = recompute(rr);
        }
    }

    QDelta recompute(size_t r) const {
        QDelta acc;
        for (const auto& [j, aj] : rows[r]) acc = acc + value[j].scaled(aj);
        return acc;
    }

    bool repair() {
        while (true) {
            int xb = -1;
            bool needs_lower = false;
            for (int x = 0; x < nvars; ++x) {
                if (basic_row[x] < 0) continue;
                if (lower[x] && value[x] < *lower[x]) {
                    xb = x;
                    needs_lower = true;
                    break;
                }
                if (upper[x] && value[x] > *upper[x]) {
                    xb = x;
                    needs_lower = false;
                    break;
                }
            }
            if (xb < 0) return true;
            const auto& row = rows[basic_row[xb]];
            int xn = -1;
            for (int x = 0; x < nvars; ++x) {
                if (basic_row[x] >= 0) continue;
                auto it = row.find(x);
                if (it == row.end()) continue;
                const Rational& a = it->second;
                if (needs_lower ? (a > 0 ? can_increase(x) : (a < 0 && can_decrease(x)))
                                : (a > 0 ? can_decrease(x) : (a < 0 && can_increase(x)))) {
                    xn = x;
                    break;
                }
            }
            if (xn < 0) return false;
            pivot(xb, xn, needs_lower ? *lower[xb] : *upper[xb]);
        }
    }

    bool assert_lower(int x, const QDelta& b) {
        if (upper[x] && b > *upper[x]) return false;
        if (lower[x] && b <= *lower[x]) return true;
        lower[x] = b;
        if (basic_row[x] < 0) {
            if (value[x] < b) update_nonbasic(x, b);
            return true;
        }
        return repair();
    }

    bool assert_upper(int x, const QDelta& b) {
        if (lower[x] && b < *lower[x]) return false;
        if (upper[x] && b >= *upper[x]) return true;
        upper[x] = b;
        if (basic_row[x] < 0) {
            if (value[x] > b) update_nonbasic(x, b);
            return true;
        }
        return repair();
    }
};

}  // namespace

DecideOutcome solve_linear(const Conj& atoms, const std::vector<VarId>& vars) {
    DecideOutcome out;
    std::vector<VarId> order = vars;  // ascending VarId = declaration order
    std::sort(order.begin(), order.end());
    std::map<VarId, int> index;
    Tableau t;
    for (VarId v : order) index[v] = t.add_var();
    int nstruct = t.nvars;

    std::map<std::vector<std::pair<int, Rational>>, int> slack_of;
    bool sat = true;
    for (const auto& at : atoms) {
        if (at.rel == Rel::NE) throw SolveError("internal: NE atom reached simplex");
        // poly = sum coef*var + c
        Rational c(0);
        std::vector<std::pair<int, Rational>> form;
        for (const auto& [m, coef] : at.p.terms()) {
            if (m.pp.empty()) {
                c = coef;
            } else {
                form.push_back({index.at(m.pp[0].first), coef});
            }
        }
        std::sort(form.begin(), form.end());
        int target;
        Rational scale(1);
        if (form.size() == 1) {
            target = form[0].first;
            scale = form[0].second;
        } else {
            auto it = slack_of.find(form);
            if (it != slack_of.end()) {
                target = it->second;
            } else {
                target = t.add_var();
                slack_of.emplace(form, target);
                // Express the form over the current nonbasic variables.
                std::map<int, Rational> row;
                for (const auto& [var, coef] : form) {
                    if (t.basic_row[var] >= 0) {
                        for (const auto& [j, aj] : t.rows[t.basic_row[var]]) {
                            Rational& slot = row[j];
                            slot += coef * aj;
                            if (slot == 0) row.erase(j);
                        }
                    } else {
                        Rational& slot = row[var];
                        slot += coef;
                        if (slot == 0) row.erase(var);
                    }
                }
                t.rows.push_back(std::move(row));
                t.row_owner.push_back(target);
                t.basic_row[target] = (int)t.rows.size() - 1;
                t.value[target] = t.recompute(t.rows.size() - 1);
            }
        }
        // scale * target + c rel 0
        Rel rel = at.rel;
        if (scale < 0) rel = mirror(rel);
        Rational rhs = -c / scale;
        switch (rel) {
            case Rel::GE: sat = t.assert_lower(target, {rhs, 0}); break;
            case Rel::GT: sat = t.assert_lower(target, {rhs, 1}); break;
            case Rel::LE: sat = t.assert_upper(target, {rhs, 0}); break;
            case Rel::LT: sat = t.assert_upper(target, {rhs, -1}); break;
            case Rel::EQ:
                sat = t.assert_lower(target, {rhs, 0}) && t.assert_upper(target, {rhs, 0});
                break;
            default: sat = false;
        }
        if (!sat) {
            out.kind = DecideOutcome::Unsat;
            return out;
        }
    }

    // Resolve delta: the largest rational in (0, 1] consistent with all bounds.
    Rational delta(1);
    for (int x = 0; x < t.nvars; ++x) {
        if (t.lower[x]) {
            const QDelta d = t.value[x] - *t.lower[x];  // >= 0 lexicographically
            if (d.b < 0 && d.a > 0) delta = std::min(delta, Rational(d.a / -d.b));
        }
        if (t.upper[x]) {
            const QDelta d = *t.upper[x] - t.value[x];
            if (d.b < 0 && d.a > 0) delta = std::min(delta, Rational(d.a / -d.b));
        }
    }
    out.kind = DecideOutcome::Sat;
    for (VarId v : order) {
        const QDelta& val = t.value[index[v]];
        out.model[v] = val.a + val.b * delta;
    }
    return out;
}

}  // namespace nra
