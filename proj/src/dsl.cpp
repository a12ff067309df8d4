#include "bge/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <map>
#include <set>
#include <sstream>

namespace bge {

namespace {

struct Token {
    std::string text;
    int column;  // 1-based start column
};

std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        if (line[i] == '#') break;
        size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) &&
               line[j] != '#')
            ++j;
        out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
        i = j;
    }
    return out;
}

int parse_int(const Token& t, int line, const char* what) {
    int v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{} || p != t.text.data() + t.text.size())
        throw ParseError(line, t.column, std::string("expected integer ") + what + ", got '" +
                                             t.text + "'");
    return v;
}

double parse_float(const std::string& s, int line, int col) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, col, "expected a number, got '" + s + "'");
    }
}

// "J12" -> (J1, 2); kinds are matched longest-first so J0/J1/SE/... are unambiguous
CompRef parse_comp_ref(const Token& t, int line) {
    static const char* kinds[] = {"SE", "SF", "TF", "GY", "J0", "J1", "R", "I", "C"};
    for (const char* k : kinds) {
        const size_t n = std::strlen(k);
        if (t.text.size() > n && t.text.compare(0, n, k) == 0) {
            Token idtok{t.text.substr(n), t.column + static_cast<int>(n)};
            bool digits = !idtok.text.empty() &&
                          std::all_of(idtok.text.begin(), idtok.text.end(), [](unsigned char c) {
                              return std::isdigit(c);
                          });
            if (!digits)
                throw ParseError(line, idtok.column,
                                 "expected a numeric id after kind '" + std::string(k) + "'");
            return {*kind_from_name(k), parse_int(idtok, line, "component id")};
        }
    }
    throw ParseError(line, t.column, "expected <kind><id> (e.g. SE1, J12), got '" + t.text + "'");
}

}  // namespace

BondGraph parse_dsl(const std::string& text) {
    BondGraph g;
    std::set<CompRef> declared;
    std::set<int> bond_ids;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool any_statement = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        any_statement = true;
        const Token& head = toks[0];

        if (head.text == "component") {
            if (toks.size() < 3)
                throw ParseError(lineno, head.column, "usage: component <kind> <id> [coeff=<v>]");
            auto kind = kind_from_name(toks[1].text);
            if (!kind)
                throw ParseError(lineno, toks[1].column,
                                 "unknown component kind '" + toks[1].text + "'");
            Component c;
            c.kind = *kind;
            c.id = parse_int(toks[2], lineno, "component id");
            if (c.id <= 0)
                throw ParseError(lineno, toks[2].column, "component ids must be positive");
            bool have_coeff = false;
            for (size_t i = 3; i < toks.size(); ++i) {
                const std::string& t = toks[i].text;
                if (t.rfind("coeff=", 0) == 0) {
                    c.coeff = parse_float(t.substr(6), lineno, toks[i].column + 6);
                    have_coeff = true;
                } else {
                    throw ParseError(lineno, toks[i].column, "unexpected token '" + t + "'");
                }
            }
            if (has_coefficient(c.kind)) {
                if (!have_coeff)
                    throw ParseError(lineno, head.column,
                                     std::string(kind_name(c.kind)) +
                                         " components require coeff=<nonzero>");
                if (c.coeff == 0.0)
                    throw ParseError(lineno, head.column, "coeff must be nonzero");
            } else if (have_coeff) {
                throw ParseError(lineno, head.column,
                                 std::string(kind_name(c.kind)) +
                                     " components do not take a coefficient");
            }
            if (!declared.insert(c.ref()).second)
                throw ParseError(lineno, toks[1].column,
                                 "duplicate component " + c.ref().str());
            g.components.push_back(c);
            continue;
        }

        if (head.text == "bond") {
            if (toks.size() != 6)
                throw ParseError(lineno, head.column,
                                 "usage: bond <id> <tail> -> <head> stroke=<head|tail>");
            Bond b;
            b.id = parse_int(toks[1], lineno, "bond id");
            b.tail = parse_comp_ref(toks[2], lineno);
            if (toks[3].text != "->")
                throw ParseError(lineno, toks[3].column, "expected '->'");
            b.head = parse_comp_ref(toks[4], lineno);
            const std::string& st = toks[5].text;
            if (st == "stroke=head")
                b.stroke_at_head = true;
            else if (st == "stroke=tail")
                b.stroke_at_head = false;
            else
                throw ParseError(lineno, toks[5].column, "expected stroke=head or stroke=tail");
            for (CompRef r : {b.tail, b.head})
                if (!declared.count(r))
                    throw ParseError(lineno, toks[2].column,
                                     "bond references undeclared component " + r.str());
            if (!bond_ids.insert(b.id).second)
                throw ParseError(lineno, toks[1].column,
                                 "duplicate bond id " + std::to_string(b.id));
            g.bonds.push_back(b);
            continue;
        }

        throw ParseError(lineno, head.column,
                         "expected 'component' or 'bond', got '" + head.text + "'");
    }

    if (!any_statement) throw ParseError(std::max(lineno, 1), 1, "empty bond graph description");
    return g;
}

std::string emit_dsl(const BondGraph& g) {
    BondGraph sorted = g;
    std::sort(sorted.components.begin(), sorted.components.end(),
              [](const Component& a, const Component& b) { return a.ref() < b.ref(); });
    std::sort(sorted.bonds.begin(), sorted.bonds.end(),
              [](const Bond& a, const Bond& b) { return a.id < b.id; });

    std::ostringstream out;
    for (const auto& c : sorted.components) {
        out << "component " << kind_name(c.kind) << ' ' << c.id;
        if (has_coefficient(c.kind)) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", c.coeff);
            out << " coeff=" << buf;
        }
        out << '\n';
    }
    for (const auto& b : sorted.bonds)
        out << "bond " << b.id << ' ' << b.tail.str() << " -> " << b.head.str()
            << (b.stroke_at_head ? " stroke=head" : " stroke=tail") << '\n';
    return out.str();
}

}  // namespace bge
