#include "smt.hpp"

#include "util/sexpr.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstring>
#include <sstream>

namespace lyapsyn {

SmtFormula SmtFormula::make_atom(Expr lhs, SmtCmp op) {
    SmtFormula f;
    f.kind = Atom;
    f.atom = SmtAtom{std::move(lhs), op};
    return f;
}

SmtFormula SmtFormula::make_and(std::vector<SmtFormula> kids) {
    SmtFormula f;
    f.kind = And;
    f.kids = std::move(kids);
    return f;
}

SmtFormula SmtFormula::make_or(std::vector<SmtFormula> kids) {
    SmtFormula f;
    f.kind = Or;
    f.kids = std::move(kids);
    return f;
}

namespace {

std::string smt_rational(const Rational& q) {
    bool neg = q < 0;
    Rational a = rat_abs(q);
    std::string body;
    if (rat_den(a) == 1)
        body = rat_num(a).str();
    else
        body = "(/ " + rat_num(a).str() + " " + rat_den(a).str() + ")";
    return neg ? "(- " + body + ")" : body;
}

std::string smt_expr(const Expr& e);

std::string smt_factor(const Factor& f) {
    if (!f.is_func) return f.sym;
    std::string arg = smt_expr(*f.arg);
    switch (f.func) {
        case FuncKind::Abs: return "(ite (>= " + arg + " 0) " + arg + " (- " + arg + "))";
        default:
            throw SmtError(std::string("cannot emit transcendental node '") + func_name(f.func) +
                           "'; relax the expression first");
    }
}

std::string smt_expr(const Expr& e) {
    if (e.is_zero()) return "0";
    std::vector<std::string> parts;
    for (const auto& t : e.terms()) {
        std::vector<std::string> fs;
        if (t.coef != 1 || t.factors.empty()) fs.push_back(smt_rational(t.coef));
        for (const auto& [f, ex] : t.factors) {
            std::string r = smt_factor(f);
            for (unsigned i = 0; i < ex; ++i) fs.push_back(r);
        }
        if (fs.size() == 1)
            parts.push_back(fs[0]);
        else {
            std::string m = "(*";
            for (const auto& s : fs) m += " " + s;
            parts.push_back(m + ")");
        }
    }
    if (parts.size() == 1) return parts[0];
    std::string out = "(+";
    for (const auto& s : parts) out += " " + s;
    return out + ")";
}

std::string smt_formula(const SmtFormula& f) {
    switch (f.kind) {
        case SmtFormula::Atom: {
            std::string lhs = smt_expr(f.atom.lhs);
            switch (f.atom.op) {
                case SmtCmp::LT: return "(< " + lhs + " 0)";
                case SmtCmp::LE: return "(<= " + lhs + " 0)";
                case SmtCmp::GT: return "(> " + lhs + " 0)";
                case SmtCmp::GE: return "(>= " + lhs + " 0)";
                case SmtCmp::EQ: return "(= " + lhs + " 0)";
                case SmtCmp::NE: return "(not (= " + lhs + " 0))";
            }
            return "";
        }
        case SmtFormula::And:
        case SmtFormula::Or: {
            if (f.kids.empty()) return f.kind == SmtFormula::And ? "true" : "false";
            if (f.kids.size() == 1) return smt_formula(f.kids[0]);
            std::string out = f.kind == SmtFormula::And ? "(and" : "(or";
            for (const auto& k : f.kids) out += " " + smt_formula(k);
            return out + ")";
        }
    }
    return "";
}

}  // namespace

std::string SmtScript::text() const {
    std::string out = "(set-logic " + logic + ")\n";
    for (const auto& d : decls) out += "(declare-const " + d + " Real)\n";
    for (const auto& a : asserts) out += "(assert " + smt_formula(a) + ")\n";
    out += "(check-sat)\n(get-model)\n";
    return out;
}

SmtScript emit(std::vector<SmtFormula> assertions, std::vector<std::string> decls, const std::string& logic) {
    SmtScript s;
    s.logic = logic;
    std::sort(decls.begin(), decls.end());
    decls.erase(std::unique(decls.begin(), decls.end()), decls.end());
    s.decls = std::move(decls);
    s.asserts = std::move(assertions);
    return s;
}

namespace {

Rational parse_model_value(const SNode& n) {
    if (n.is_atom) {
        const std::string& a = n.atom;
        if (a.find('.') != std::string::npos) return rat_from_decimal(a);
        return Rational(BigInt(a));
    }
    if (n.kids.empty()) throw SmtError("malformed model value '" + n.str() + "'");
    const std::string& head = n.kids[0].atom;
    if (head == "-" && n.kids.size() == 2) return -parse_model_value(n.kids[1]);
    if (head == "/" && n.kids.size() == 3) {
        Rational num = parse_model_value(n.kids[1]);
        Rational den = parse_model_value(n.kids[2]);
        if (den == 0) throw SmtError("model value with zero denominator");
        return num / den;
    }
    if (head == "+" && n.kids.size() == 2) return parse_model_value(n.kids[1]);
    throw SmtError("malformed model value '" + n.str() + "'");
}

void parse_model_entry(const SNode& n, Point& model) {
    if (n.is_atom || n.kids.empty()) return;
    if (n.kids[0].is_atom && n.kids[0].atom == "define-fun" && n.kids.size() >= 5) {
        model[n.kids[1].atom] = parse_model_value(n.kids[4]);
        return;
    }
    if (n.kids.size() == 2 && n.kids[0].is_atom) {
        model[n.kids[0].atom] = parse_model_value(n.kids[1]);
        return;
    }
}

struct Pipe {
    int fd[2] = {-1, -1};
    Pipe() {
        if (pipe(fd) != 0) throw SmtError("pipe() failed");
    }
    ~Pipe() {
        close_read();
        close_write();
    }
    void close_read() {
        if (fd[0] >= 0) close(fd[0]);
        fd[0] = -1;
    }
    void close_write() {
        if (fd[1] >= 0) close(fd[1]);
        fd[1] = -1;
    }
};

}  // namespace

SolverResult run_solver(const std::string& script_text, const std::string& cmd, long timeout_ms) {
    if (cmd.empty()) throw SmtError("empty solver command");
    Pipe to_child, from_child, err_child;
    pid_t pid = fork();
    if (pid < 0) throw SmtError("fork() failed");
    if (pid == 0) {
        dup2(to_child.fd[0], STDIN_FILENO);
        dup2(from_child.fd[1], STDOUT_FILENO);
        dup2(err_child.fd[1], STDERR_FILENO);
        close(to_child.fd[0]);
        close(to_child.fd[1]);
        close(from_child.fd[0]);
        close(from_child.fd[1]);
        close(err_child.fd[0]);
        close(err_child.fd[1]);
        execl("/bin/sh", "sh", "-c", cmd.c_str(), (char*)nullptr);
        _exit(127);
    }
    to_child.close_read();
    from_child.close_write();
    err_child.close_write();

    // Feed the script; the solver may exit early, so tolerate EPIPE.
    signal(SIGPIPE, SIG_IGN);
    size_t off = 0;
    while (off < script_text.size()) {
        ssize_t w = write(to_child.fd[1], script_text.data() + off, script_text.size() - off);
        if (w <= 0) break;
        off += (size_t)w;
    }
    to_child.close_write();

    auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    std::string out, err;
    bool timed_out = false;
    std::vector<pollfd> fds = {{from_child.fd[0], POLLIN, 0}, {err_child.fd[0], POLLIN, 0}};
    int open_count = 2;
    char buf[4096];
    while (open_count > 0) {
        auto now = std::chrono::steady_clock::now();
        long left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
        if (left <= 0) {
            timed_out = true;
            break;
        }
        int rc = poll(fds.data(), fds.size(), (int)std::min(left, 200L));
        if (rc < 0) break;
        for (auto& p : fds) {
            if (p.fd < 0 || !(p.revents & (POLLIN | POLLHUP))) continue;
            ssize_t r = read(p.fd, buf, sizeof buf);
            if (r > 0) {
                (p.fd == from_child.fd[0] ? out : err).append(buf, (size_t)r);
            } else {
                p.fd = -1;
                --open_count;
            }
        }
    }
    int status = 0;
    if (timed_out) {
        kill(pid, SIGKILL);
        waitpid(pid, &status, 0);
        SolverResult res;
        res.verdict = SolverResult::Unknown;
        res.reason = "timeout";
        return res;
    }
    waitpid(pid, &status, 0);
    if (WIFEXITED(status) && WEXITSTATUS(status) == 127)
        throw SmtError("solver command not found: '" + cmd + "'");

    std::istringstream lines(out);
    std::string line, verdict;
    std::string rest;
    bool seen_verdict = false;
    while (std::getline(lines, line)) {
        std::string t = line;
        t.erase(std::remove_if(t.begin(), t.end(), ::isspace), t.end());
        if (!seen_verdict && (t == "sat" || t == "unsat" || t == "unknown")) {
            verdict = t;
            seen_verdict = true;
            continue;
        }
        if (seen_verdict) rest += line + "\n";
    }
    if (!seen_verdict) {
        std::string diag = err.empty() ? out : err;
        if (diag.size() > 500) diag = diag.substr(0, 500) + "...";
        throw SmtError("solver produced no verdict (cmd: '" + cmd + "', exit status " +
                       std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1) + "): " + diag);
    }
    SolverResult res;
    if (verdict == "unsat") {
        res.verdict = SolverResult::Unsat;
        return res;
    }
    if (verdict == "unknown") {
        res.verdict = SolverResult::Unknown;
        res.reason = "solver reported unknown";
        return res;
    }
    res.verdict = SolverResult::Sat;
    try {
        auto nodes = sexpr_parse_all(rest);
        for (const auto& n : nodes) {
            if (n.is_atom) continue;
            if (!n.kids.empty() && n.kids[0].is_atom && n.kids[0].atom == "error") continue;
            if (!n.kids.empty() && n.kids[0].is_atom && n.kids[0].atom == "model") {
                for (size_t i = 1; i < n.kids.size(); ++i) parse_model_entry(n.kids[i], res.model);
            } else {
                for (const auto& k : n.kids) parse_model_entry(k, res.model);
                parse_model_entry(n, res.model);
            }
        }
    } catch (const SexprError& e) {
        throw SmtError(std::string("malformed model: ") + e.what());
    }
    return res;
}

std::string resolve_solver_cmd(const std::string& explicit_cmd) {
    if (!explicit_cmd.empty()) return explicit_cmd;
    if (const char* env = getenv("LYAPSYN_SOLVER"); env && *env) return env;
    if (const char* path = getenv("PATH")) {
        std::stringstream ss(path);
        std::string dir;
        while (std::getline(ss, dir, ':')) {
            if (dir.empty()) continue;
            std::string z3 = dir + "/z3";
            if (access(z3.c_str(), X_OK) == 0) return "z3 -in";
        }
    }
    char buf[4096];
    ssize_t n = readlink("/proc/self/exe", buf, sizeof buf - 1);
    if (n > 0) {
        buf[n] = 0;
        std::string exe(buf);
        auto slash = exe.find_last_of('/');
        if (slash != std::string::npos) {
            std::string sibling = exe.substr(0, slash) + "/nrasolve";
            if (access(sibling.c_str(), X_OK) == 0) return "'" + sibling + "'";
        }
    }
    throw SmtError(
        "no SMT solver available: set --solver-cmd or LYAPSYN_SOLVER, put z3 on PATH, or build the bundled "
        "nrasolve");
}

bool atom_holds(const SmtAtom& a, const Point& pt) {
    Rational v = a.lhs.eval_rational(pt);
    switch (a.op) {
        case SmtCmp::LT: return v < 0;
        case SmtCmp::LE: return v <= 0;
        case SmtCmp::GT: return v > 0;
        case SmtCmp::GE: return v >= 0;
        case SmtCmp::EQ: return v == 0;
        case SmtCmp::NE: return v != 0;
    }
    return false;
}

bool formula_holds(const SmtFormula& f, const Point& pt) {
    switch (f.kind) {
        case SmtFormula::Atom: return atom_holds(f.atom, pt);
        case SmtFormula::And:
            for (const auto& k : f.kids)
                if (!formula_holds(k, pt)) return false;
            return true;
        case SmtFormula::Or:
            for (const auto& k : f.kids)
                if (formula_holds(k, pt)) return true;
            return false;
    }
    return false;
}

}  // namespace lyapsyn
