#ifndef LYAPSYN_TEST_HELPERS_HPP
#define LYAPSYN_TEST_HELPERS_HPP

#include <string>
#include <unistd.h>

// Absolute path of the bundled solver next to the test binary.
inline std::string nrasolve_path() {
    char buf[4096];
    ssize_t n = readlink("/proc/self/exe", buf, sizeof buf - 1);
    if (n <= 0) return "nrasolve";
    buf[n] = 0;
    std::string exe(buf);
    auto slash = exe.find_last_of('/');
    return exe.substr(0, slash) + "/nrasolve";
}

inline std::string nrasolve_cmd() { return "'" + nrasolve_path() + "'"; }

#endif
