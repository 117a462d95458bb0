// nrasolve: a small exact-arithmetic SMT-LIB2 solver for the quantifier-free
// nonlinear real arithmetic fragment produced by lyapsyn. Reads a script on
// stdin, prints sat/unsat/unknown and rational models.

#include "nrasolve/solver.hpp"

#include <iostream>

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--help" || a == "-h") {
            std::cout << "usage: nrasolve < script.smt2\n"
                         "Supports: set-logic QF_NRA, declare-const/declare-fun (Real), assert,\n"
                         "check-sat, get-model, reset, exit. Decides conjunctions via exact\n"
                         "Fourier-Motzkin / quadratic virtual substitution / Sturm root isolation,\n"
                         "with a delta-rational simplex for linear conjunctions.\n";
            return 0;
        }
        if (a == "--version") {
            std::cout << "nrasolve 1.0\n";
            return 0;
        }
    }
    return nra::run_session(std::cin, std::cout, std::cerr);
}
