#include "fanolab/poly_io.hpp"

#include <cctype>

#include "fanolab/errors.hpp"

namespace fanolab {

VarNames VarNames::p5() { return VarNames({"x0", "x1", "x2", "x3", "x4", "x5"}); }

VarNames VarNames::chart(int pivot0, int pivot1) {
    std::vector<std::string> n;
    for (int row = 0; row < 2; ++row)
        for (int j = 0; j < 6; ++j) {
            if (j == pivot0 || j == pivot1) continue;
            n.push_back("p" + std::to_string(row == 0 ? 0 : 1) + std::to_string(j));
        }
    return VarNames(n);
}

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;
    const VarNames& vars;

    Parser(const std::string& text, const VarNames& v) : s(text), vars(v) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }
    bool accept(char c) {
        if (peek(c)) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos); }

    PolyQ parse() {
        PolyQ p = expr();
        skip_ws();
        if (pos != s.size()) fail("unexpected trailing input");
        return p;
    }

    PolyQ expr() {
        skip_ws();
        bool neg = false;
        while (accept('+') || (peek('-') && (accept('-'), neg = !neg, true))) skip_ws();
        PolyQ acc = term();
        if (neg) acc = -acc;
        while (true) {
            skip_ws();
            if (accept('+'))
                acc = acc + term();
            else if (accept('-'))
                acc = acc - term();
            else
                break;
        }
        return acc;
    }

    PolyQ term() {
        PolyQ acc = factor();
        while (true) {
            skip_ws();
            if (accept('*'))
                acc = acc * factor();
            else
                break;
        }
        return acc;
    }

    PolyQ factor() {
        PolyQ b = base();
        skip_ws();
        if (accept('^')) {
            skip_ws();
            if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
                fail("exponent must be a non-negative integer");
            long e = 0;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                e = e * 10 + (s[pos] - '0');
                if (e > 255) fail("exponent too large");
                ++pos;
            }
            return b.pow(static_cast<int>(e));
        }
        return b;
    }

    PolyQ base() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of input");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            PolyQ p = expr();
            if (!accept(')')) fail("expected ')'");
            return p;
        }
        if (c == '-') {
            ++pos;
            return -factor();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return variable();
        fail("unexpected character");
    }

    PolyQ number() {
        std::string num = digits();
        std::string den = "1";
        skip_ws();
        if (accept('/')) {
            skip_ws();
            if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
                fail("expected denominator digits");
            den = digits();
            if (Int(den) == 0) fail("zero denominator");
        }
        return PolyQ::constant(vars.arity(), rat_from_strings(num, den));
    }

    std::string digits() {
        std::string d;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) d += s[pos++];
        return d;
    }

    PolyQ variable() {
        size_t start = pos;
        std::string name;
        name += s[pos++];
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            name += s[pos++];
        int idx = vars.index_of(name);
        if (idx < 0) {
            pos = start;
            fail("unknown variable '" + name + "'");
        }
        return PolyQ::variable(vars.arity(), idx, Rat(1));
    }
};

}  // namespace

PolyQ parse_poly(const std::string& text, const VarNames& vars) {
    Parser p(text, vars);
    return p.parse();
}

std::string format_poly(const PolyQ& p, const VarNames& vars) {
    if (p.is_zero_poly()) return "0";
    std::string out;
    // descending canonical order: leading term first
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [m, c] = *it;
        Rat a = c;
        if (out.empty()) {
            if (a < 0) {
                out += "-";
                a = -a;
            }
        } else {
            out += a < 0 ? " - " : " + ";
            if (a < 0) a = -a;
        }
        std::vector<std::string> parts;
        if (a != 1 || m.degree() == 0) parts.push_back(a.get_str());
        for (int v = 0; v < p.nvars(); ++v) {
            if (m[v] == 0) continue;
            std::string piece = vars.names[v];
            if (m[v] > 1) piece += "^" + std::to_string(m[v]);
            parts.push_back(piece);
        }
        for (size_t i = 0; i < parts.size(); ++i) {
            if (i) out += "*";
            out += parts[i];
        }
    }
    return out;
}

nlohmann::ordered_json poly_to_json(const PolyQ& p, const VarNames& vars) {
    nlohmann::ordered_json j;
    j["vars"] = vars.names;
    auto terms = nlohmann::ordered_json::array();
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [m, c] = *it;
        nlohmann::ordered_json t;
        std::vector<int> exp(p.nvars());
        for (int v = 0; v < p.nvars(); ++v) exp[v] = m[v];
        t["exp"] = exp;
        t["num"] = c.get_num().get_str();
        t["den"] = c.get_den().get_str();
        terms.push_back(t);
    }
    j["terms"] = terms;
    return j;
}

PolyQ poly_from_json(const nlohmann::json& j, VarNames* names_out) {
    if (!j.contains("vars") || !j.contains("terms")) throw std::domain_error("poly json needs 'vars' and 'terms'");
    VarNames names(j["vars"].get<std::vector<std::string>>());
    PolyQ p(names.arity());
    for (auto& t : j["terms"]) {
        auto exp = t["exp"].get<std::vector<int>>();
        if (static_cast<int>(exp.size()) != names.arity()) throw std::domain_error("term exponent arity mismatch");
        Monomial m(names.arity());
        for (size_t i = 0; i < exp.size(); ++i) m.set(static_cast<int>(i), exp[i]);
        p.add_term(m, rat_from_strings(t["num"].get<std::string>(), t["den"].get<std::string>()));
    }
    if (names_out) *names_out = names;
    return p;
}

}  // namespace fanolab
