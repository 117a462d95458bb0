#ifndef LYAPSYN_SEXPR_HPP
#define LYAPSYN_SEXPR_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace lyapsyn {

struct SexprError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SNode {
    bool is_atom = true;
    std::string atom;
    std::vector<SNode> kids;

    static SNode make_atom(std::string a) {
        SNode n;
        n.is_atom = true;
        n.atom = std::move(a);
        return n;
    }
    static SNode make_list(std::vector<SNode> k) {
        SNode n;
        n.is_atom = false;
        n.kids = std::move(k);
        return n;
    }
    std::string str() const;
};

// Parses a sequence of s-expressions; comments start with ';'.
std::vector<SNode> sexpr_parse_all(const std::string& text);

}  // namespace lyapsyn

#endif
