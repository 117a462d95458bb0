#include "sexpr.hpp"

#include <cctype>

namespace lyapsyn {

std::string SNode::str() const {
    if (is_atom) return atom;
    std::string out = "(";
    for (size_t i = 0; i < kids.size(); ++i) {
        if (i) out += " ";
        out += kids[i].str();
    }
    return out + ")";
}

namespace {

struct Reader {
    const std::string& s;
    size_t pos = 0;

    void skip() {
        while (pos < s.size()) {
            if (std::isspace(static_cast<unsigned char>(s[pos]))) {
                ++pos;
            } else if (s[pos] == ';') {
                while (pos < s.size() && s[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
    }

    SNode read() {
        skip();
        if (pos >= s.size()) throw SexprError("unexpected end of s-expression input");
        if (s[pos] == '(') {
            ++pos;
            std::vector<SNode> kids;
            while (true) {
                skip();
                if (pos >= s.size()) throw SexprError("unclosed '(' in s-expression");
                if (s[pos] == ')') {
                    ++pos;
                    return SNode::make_list(std::move(kids));
                }
                kids.push_back(read());
            }
        }
        if (s[pos] == ')') throw SexprError("unexpected ')'");
        if (s[pos] == '"') {
            std::string a;
            a.push_back(s[pos++]);
            while (pos < s.size() && s[pos] != '"') a.push_back(s[pos++]);
            if (pos < s.size()) a.push_back(s[pos++]);
            return SNode::make_atom(std::move(a));
        }
        std::string a;
        while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) && s[pos] != '(' &&
               s[pos] != ')' && s[pos] != ';')
            a.push_back(s[pos++]);
        return SNode::make_atom(std::move(a));
    }
};

}  // namespace

std::vector<SNode> sexpr_parse_all(const std::string& text) {
    Reader r{text};
    std::vector<SNode> out;
    while (true) {
        r.skip();
        if (r.pos >= text.size()) break;
        out.push_back(r.read());
    }
    return out;
}

}  // namespace lyapsyn
