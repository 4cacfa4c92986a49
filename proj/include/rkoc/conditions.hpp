#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rkoc/errors.hpp"
#include "rkoc/schemes.hpp"
#include "rkoc/tableau.hpp"

namespace rkoc {

enum class CondKind { State, Additional };

/// One multiplicative factor of a condition term: a[u,v], b[u], c[u] or d[u],
/// raised to an integer power. Indices refer to summation-variable slots.
struct Atom {
    char kind;  // 'a', 'b', 'c', 'd'
    int u = 0;
    int v = 0;  // only for 'a'
    int power = 1;
};

/// A condition body: sum over all index tuples of a product of atoms divided
/// by a product of b-atoms.
struct SumExpr {
    int nvars = 0;
    std::vector<Atom> num;
    std::vector<Atom> den;  // b-atoms only
};

/// One row of the order-condition tables: id, order, state/additional split,
/// declarative body, exact right-hand side.
struct Condition {
    std::string id;
    int order = 0;
    CondKind kind = CondKind::State;
    SumExpr expr;
    Rational rhs;
    std::string text;  // source form, kept for export and diagnostics
};

namespace detail {

/// Parse "b[i]*a[i,k]*c[i]^2*d[k] / (b[k]^2*b[l])". Index letters map to
/// variable slots in order of first appearance.
inline SumExpr parse_sum_expr(const std::string& text) {
    SumExpr e;
    std::map<char, int> slot;
    std::string t;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;

    auto var = [&](char letter) {
        auto it = slot.find(letter);
        if (it != slot.end()) return it->second;
        int id = static_cast<int>(slot.size());
        if (id >= 4) throw ParseError("more than 4 summation variables in '" + text + "'");
        slot[letter] = id;
        return id;
    };

    std::size_t pos = 0;
    auto parse_atom = [&]() {
        if (pos >= t.size()) throw ParseError("expected atom in '" + text + "'");
        char kind = t[pos];
        if (kind != 'a' && kind != 'b' && kind != 'c' && kind != 'd')
            throw ParseError(std::string("bad atom '") + kind + "' in '" + text + "'");
        ++pos;
        if (pos >= t.size() || t[pos] != '[') throw ParseError("expected '[' in '" + text + "'");
        ++pos;
        Atom a{kind, var(t[pos]), 0, 1};
        ++pos;
        if (kind == 'a') {
            if (t[pos] != ',') throw ParseError("a-atom needs two indices in '" + text + "'");
            ++pos;
            a.v = var(t[pos]);
            ++pos;
        }
        if (t[pos] != ']') throw ParseError("expected ']' in '" + text + "'");
        ++pos;
        if (pos < t.size() && t[pos] == '^') {
            ++pos;
            a.power = 0;
            while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) {
                a.power = a.power * 10 + (t[pos] - '0');
                ++pos;
            }
            if (a.power < 1) throw ParseError("bad power in '" + text + "'");
        }
        return a;
    };

    auto parse_product = [&](std::vector<Atom>& into, bool paren_ok) {
        bool paren = paren_ok && pos < t.size() && t[pos] == '(';
        if (paren) ++pos;
        into.push_back(parse_atom());
        while (pos < t.size() && t[pos] == '*') {
            ++pos;
            into.push_back(parse_atom());
        }
        if (paren) {
            if (pos >= t.size() || t[pos] != ')') throw ParseError("unbalanced '(' in '" + text + "'");
            ++pos;
        }
    };

    parse_product(e.num, false);
    if (pos < t.size() && t[pos] == '/') {
        ++pos;
        parse_product(e.den, true);
    }
    if (pos != t.size()) throw ParseError("trailing junk in '" + text + "'");
    for (const auto& a : e.den)
        if (a.kind != 'b') throw ParseError("denominator atoms must be b-atoms in '" + text + "'");
    e.nvars = static_cast<int>(slot.size());
    return e;
}

struct CondSpec {
    const char* id;
    int order;
    char kind;  // 'S' or 'A'
    const char* expr;
    const char* rhs;
};

// The order-condition tables. Index letters follow the printed sums. Four
// entries are structural repairs of typographic defects, validated against
// the order-six collocation schemes (see the comments at each entry).
inline constexpr CondSpec kConditionTable[] = {
    // state, orders 1-4
    {"O1", 1, 'S', "b[i]", "1"},
    {"O2", 2, 'S', "d[i]", "1/2"},
    {"O3.1", 3, 'S', "c[i]*d[i]", "1/6"},
    {"O3.2", 3, 'S', "b[i]*c[i]^2", "1/3"},
    {"O4.1", 4, 'S', "b[i]*c[i]^3", "1/4"},
    {"O4.2", 4, 'S', "b[i]*c[i]*a[i,j]*c[j]", "1/8"},
    {"O4.3", 4, 'S', "d[i]*c[i]^2", "1/12"},
    {"O4.4", 4, 'S', "d[i]*a[i,j]*c[j]", "1/24"},
    // additional, orders 3-4
    {"A3", 3, 'A', "d[i]^2/b[i]", "1/3"},
    {"A4.1", 4, 'A', "c[i]*d[i]^2/b[i]", "1/12"},
    {"A4.2", 4, 'A', "d[i]^3/b[i]^2", "1/4"},
    {"A4.3", 4, 'A', "b[i]*c[i]*a[i,j]*d[j]/b[j]", "5/24"},
    {"A4.4", 4, 'A', "d[i]*a[i,j]*d[j]/b[j]", "1/8"},
    // state, order 5
    {"O5-1.1", 5, 'S', "b[i]*a[i,k]*a[k,j]*c[i]*c[j]", "1/30"},
    {"O5-1.2", 5, 'S', "a[j,k]*c[j]*d[j]*c[k]", "1/40"},
    {"O5-1.3", 5, 'S', "b[i]*a[i,j]*c[i]*c[j]^2", "1/15"},
    {"O5-2.1", 5, 'S', "c[j]^3*d[j]", "1/20"},
    {"O5-2.2", 5, 'S', "b[i]*a[l,k]*a[i,l]*c[i]*d[k]/b[k]", "11/120"},
    {"O5-2.3", 5, 'S', "b[i]*a[i,j]*c[i]^2*c[j]", "1/10"},
    {"O5-3.1", 5, 'S', "a[k,j]*c[j]^2*d[k]", "1/60"},
    {"O5-3.2", 5, 'S', "b[i]*c[i]^4", "1/5"},
    {"O5-3.3", 5, 'S', "b[i]*a[i,j]*c[j]*a[i,k]*c[k]", "1/20"},  // b_i (sum_j a_ij c_j)^2, expanded
    // additional, order 5
    {"A5-1.1", 5, 'A', "a[l,k]*c[k]*d[k]*d[l]/b[k]", "1/40"},
    {"A5-1.2", 5, 'A', "c[k]^2*d[k]^2/b[k]", "1/30"},
    {"A5-1.3", 5, 'A', "c[l]*d[l]^3/b[l]^2", "1/20"},
    {"A5-2.1", 5, 'A', "a[k,l]*d[k]^2*c[l]/b[k]", "1/60"},
    {"A5-2.2", 5, 'A', "d[m]^4/b[m]^3", "1/5"},
    {"A5-2.3", 5, 'A', "b[i]*a[i,k]*a[i,j]*c[j]*c[k]", "1/20"},
    {"A5-3.1", 5, 'A', "a[l,k]*a[k,j]*c[j]*d[l]", "1/120"},
    {"A5-3.2", 5, 'A', "a[l,k]*d[k]*c[l]*d[l]/b[k]", "7/120"},
    {"A5-3.3", 5, 'A', "b[i]*b[j]*a[j,k]*a[i,k]*c[i]*c[j]/b[k]", "2/15"},
    {"A5-4.1", 5, 'A', "b[i]*a[i,k]*c[i]*c[k]*d[k]/b[k]", "7/120"},
    {"A5-4.2", 5, 'A', "b[i]*a[i,l]*c[i]*d[l]^2/b[l]^2", "3/20"},
    {"A5-4.3", 5, 'A', "a[m,k]*a[l,k]*d[l]*d[m]/b[k]", "1/20"},
    {"A5-5.1", 5, 'A', "a[m,l]*d[l]^2*d[m]/b[l]^2", "1/10"},
    {"A5-5.2", 5, 'A', "a[m,l]*a[l,k]*d[k]*d[m]/b[k]", "1/30"},
    {"A5-5.3", 5, 'A', "b[i]*a[l,k]*a[i,k]*c[i]*d[l]/b[k]", "3/40"},
    {"A5-6.1", 5, 'A', "b[i]*a[i,k]*a[i,l]*d[k]*c[l]/b[k]", "3/40"},
    {"A5-6.2", 5, 'A', "b[i]*a[i,m]*a[i,l]*d[l]*d[m]/(b[l]*b[m])", "2/15"},
    {"A5-6.3", 5, 'A', "b[i]*a[i,k]*c[i]^2*d[k]/b[k]", "3/20"},
    {"A5-7.1", 5, 'A', "a[l,m]*d[l]^2*d[m]/(b[l]*b[m])", "1/15"},
    // state, order 6
    {"O6-1.1", 6, 'S', "c[j]^4*d[j]", "1/30"},
    {"O6-1.2", 6, 'S', "a[l,m]*a[k,l]*a[j,k]*d[j]*c[m]", "1/720"},
    {"O6-1.3", 6, 'S', "b[i]*a[i,j]*c[i]^2*c[j]^2", "1/18"},
    {"O6-2.1", 6, 'S', "a[j,k]*c[j]*d[j]*c[k]^2", "1/90"},
    {"O6-2.2", 6, 'S', "b[i]*a[i,j]*c[i]*c[j]^3", "1/24"},
    {"O6-2.3", 6, 'S', "a[k,j]*c[j]^3*d[k]", "1/120"},
    {"O6-3.1", 6, 'S', "b[i]*a[i,j]*c[i]^3*c[j]", "1/12"},
    {"O6-3.2", 6, 'S', "a[j,k]*c[j]^2*d[j]*c[k]", "1/60"},
    {"O6-3.3", 6, 'S', "b[i]*a[i,j]*a[j,k]*c[i]*c[j]*c[k]", "1/48"},
    {"O6-4.1", 6, 'S', "a[l,j]*a[j,k]*c[j]*c[k]*d[l]", "1/240"},
    {"O6-4.2", 6, 'S', "a[k,l]*a[j,k]*c[j]*d[j]*c[l]", "1/180"},
    {"O6-4.3", 6, 'S', "b[i]*a[j,k]*a[i,j]*c[i]^2*c[k]", "1/36"},
    {"O6-5.1", 6, 'S', "b[i]*a[i,k]*a[k,j]*c[i]*c[j]^2", "1/72"},
    {"O6-5.2", 6, 'S', "a[l,k]*a[k,j]*c[j]^2*d[l]", "1/360"},
    {"O6-5.3", 6, 'S', "b[i]*a[i,k]*a[i,j]*c[j]^2*c[k]", "1/36"},
    {"O6-6.1", 6, 'S', "b[i]*a[i,l]*a[i,k]*a[k,j]*c[j]*c[l]", "1/72"},
    {"O6-6.2", 6, 'S', "b[i]*a[k,l]*a[j,k]*a[i,j]*c[i]*c[l]", "1/144"},
    {"O6-6.3", 6, 'S', "b[i]*c[i]^5", "1/6"},
    {"O6-7.1", 6, 'S', "b[i]*c[i]*a[i,j]*c[j]*a[i,k]*c[k]", "1/24"},        // b_i c_i (sum_j a_ij c_j)^2
    {"O6-7.2", 6, 'S', "b[i]*a[i,j]*a[j,k]*c[k]*a[j,l]*c[l]", "1/120"},     // b_i a_ij (sum_k a_jk c_k)^2
    // additional, order 6, part 1
    {"A6-1.1", 6, 'A', "d[n]^5/b[n]^4", "1/6"},
    {"A6-1.2", 6, 'A', "c[m]*d[m]^4/b[m]^3", "1/30"},
    {"A6-1.3", 6, 'A', "c[l]^2*d[l]^3/b[l]^2", "1/60"},
    {"A6-2.1", 6, 'A', "c[k]^3*d[k]^2/b[k]", "1/60"},
    {"A6-2.2", 6, 'A', "b[i]*a[i,k]*c[i]^2*c[k]*d[k]/b[k]", "2/45"},
    {"A6-2.3", 6, 'A', "a[l,k]*c[k]*d[k]*c[l]*d[l]/b[k]", "1/72"},
    {"A6-3.1", 6, 'A', "b[i]*a[i,l]*c[i]^2*d[l]^2/b[l]^2", "19/180"},
    {"A6-3.2", 6, 'A', "a[m,l]*d[l]^2*c[m]*d[m]/b[l]^2", "2/45"},
    {"A6-3.3", 6, 'A', "a[n,m]*d[m]^2*d[n]^2/(b[m]^2*b[n])", "1/18"},
    {"A6-4.1", 6, 'A', "a[k,l]*d[k]^2*c[l]^2/b[k]", "1/180"},
    {"A6-4.2", 6, 'A', "a[l,m]*d[l]^2*c[m]*d[m]/(b[l]*b[m])", "1/90"},
    {"A6-4.3", 6, 'A', "b[i]*a[i,k]*c[i]^3*d[k]/b[k]", "7/60"},
    {"A6-5.1", 6, 'A', "b[i]*a[i,k]*c[i]*c[k]^2*d[k]/b[k]", "1/40"},
    {"A6-5.2", 6, 'A', "a[l,k]*c[k]^2*d[k]*d[l]/b[k]", "1/120"},
    {"A6-5.3", 6, 'A', "a[l,k]*d[k]*c[l]^2*d[l]/b[k]", "1/30"},
    {"A6-6.1", 6, 'A', "b[i]*a[i,l]*c[i]*c[l]*d[l]^2/b[l]^2", "1/30"},
    {"A6-6.2", 6, 'A', "a[m,l]*c[l]*d[l]^2*d[m]/b[l]^2", "1/60"},
    {"A6-6.3", 6, 'A', "a[k,l]*c[k]*d[k]^2*c[l]/b[k]", "1/120"},
    {"A6-7.1", 6, 'A', "a[l,m]*c[l]*d[l]^2*d[m]/(b[l]*b[m])", "1/40"},
    {"A6-7.2", 6, 'A', "b[i]*a[i,m]*c[i]*d[m]^3/b[m]^3", "7/60"},
    {"A6-7.3", 6, 'A', "a[n,m]*d[m]^3*d[n]/b[m]^3", "1/12"},
    // additional, order 6, part 2
    {"A6-8.1", 6, 'A', "a[l,m]*d[l]^3*c[m]/b[l]^2", "1/120"},
    {"A6-8.2", 6, 'A', "a[n,l]*a[m,l]*d[l]*d[m]*d[n]/b[l]^2", "1/24"},
    {"A6-8.3", 6, 'A', "a[m,k]*a[l,k]*c[k]*d[l]*d[m]/b[k]", "1/120"},
    {"A6-9.1", 6, 'A', "a[m,n]*d[m]^3*d[n]/(b[m]^2*b[n])", "1/24"},
    {"A6-9.2", 6, 'A', "a[m,l]*a[l,k]*d[k]*c[l]*d[m]/b[k]", "1/80"},
    {"A6-9.3", 6, 'A', "b[i]*a[i,m]*a[i,l]*c[i]*d[l]*d[m]/(b[l]*b[m])", "11/120"},
    {"A6-10.1", 6, 'A', "a[n,l]*a[l,m]*d[l]*d[m]*d[n]/(b[l]*b[m])", "1/48"},
    {"A6-10.2", 6, 'A', "a[n,m]*a[n,l]*d[l]*d[m]*d[n]/(b[l]*b[m])", "1/24"},
    {"A6-10.3", 6, 'A', "b[i]*b[j]*a[j,k]*a[i,k]*c[i]*c[j]*c[k]/b[k]", "1/24"},
    {"A6-11.1", 6, 'A', "b[i]*b[j]*a[j,l]*a[i,l]*c[i]*c[j]*d[l]/b[l]^2", "11/120"},
    {"A6-11.2", 6, 'A', "b[i]*a[l,k]*a[i,l]*c[i]*d[k]*c[l]/b[k]", "11/240"},
    {"A6-11.3", 6, 'A', "b[i]*a[l,k]*a[i,k]*c[i]*c[k]*d[l]/b[k]", "1/60"},
    {"A6-12.1", 6, 'A', "b[i]*a[m,l]*a[i,l]*c[i]*d[l]*d[m]/b[l]^2", "7/120"},
    {"A6-12.2", 6, 'A', "b[i]*a[l,m]*a[i,l]*c[i]*d[l]*d[m]/(b[l]*b[m])", "11/240"},
    {"A6-12.3", 6, 'A', "b[i]*a[i,k]*a[i,j]*c[i]*c[j]*c[k]", "1/24"},
    {"A6-13.1", 6, 'A', "b[i]*a[i,k]*a[i,l]*c[i]*d[k]*c[l]/b[k]", "7/120"},
    {"A6-13.2", 6, 'A', "a[m,k]*a[k,l]*d[k]*c[l]*d[m]/b[k]", "1/240"},
    {"A6-13.3", 6, 'A', "b[i]*a[i,k]*a[k,l]*c[i]*d[k]*c[l]/b[k]", "1/80"},
    {"A6-14.1", 6, 'A', "b[i]*a[i,m]*a[l,m]*c[i]*d[l]^2/(b[l]*b[m])", "7/180"},
    {"A6-14.2", 6, 'A', "a[j,l]*a[j,k]*d[j]*c[k]*c[l]", "1/120"},
    {"A6-14.3", 6, 'A', "a[l,k]*a[l,m]*d[k]*d[l]*c[m]/b[k]", "1/60"},
    // A6-15.1: the paper prints a dangling b_k ("sum b_i a_lk a_ik c_i^2 d_l  b_k");
    // encoded with b_k in the denominator, matching every neighbouring row.
    {"A6-15.1", 6, 'A', "b[i]*a[l,k]*a[i,k]*c[i]^2*d[l]/b[k]", "19/360"},
    {"A6-15.2", 6, 'A', "a[m,k]*a[l,k]*c[l]*d[l]*d[m]/b[k]", "1/45"},
    {"A6-15.3", 6, 'A', "a[n,m]*a[l,m]*d[l]^2*d[n]/(b[l]*b[m])", "1/36"},
    {"A6-16.1", 6, 'A', "a[l,m]*a[k,l]*d[k]^2*c[m]/b[k]", "1/360"},
    {"A6-16.2", 6, 'A', "b[i]*a[i,m]*a[m,l]*c[i]*d[l]^2/b[l]^2", "13/180"},
    {"A6-16.3", 6, 'A', "a[n,m]*a[l,n]*d[l]^2*d[m]/(b[l]*b[m])", "1/72"},
    {"A6-17.1", 6, 'A', "a[n,m]*a[m,l]*d[l]^2*d[n]/b[l]^2", "1/36"},
    {"A6-17.2", 6, 'A', "b[i]*a[i,m]*a[i,l]*d[l]^2*c[m]/b[l]^2", "19/360"},
    {"A6-17.3", 6, 'A', "b[i]*a[i,n]*a[i,m]*d[m]^2*d[n]/(b[m]^2*b[n])", "7/72"},
    {"A6-18.1", 6, 'A', "b[i]*a[i,k]*a[l,k]*c[i]*c[l]*d[l]/b[k]", "13/360"},
    {"A6-18.2", 6, 'A', "a[m,k]*a[l,m]*d[k]*c[l]*d[l]/b[k]", "7/360"},
    {"A6-18.3", 6, 'A', "b[i]*a[i,l]*a[l,k]*c[i]*c[k]*d[k]/b[k]", "7/360"},
    {"A6-19.1", 6, 'A', "a[m,l]*a[l,k]*c[k]*d[k]*d[m]/b[k]", "1/180"},
    {"A6-19.2", 6, 'A', "b[i]*a[i,l]*a[i,k]*c[k]*d[k]*c[l]/b[k]", "1/45"},
    {"A6-19.3", 6, 'A', "b[i]*a[i,m]*a[i,l]*c[l]*d[l]*d[m]/(b[l]*b[m])", "13/360"},
    {"A6-20.1", 6, 'A', "b[i]*b[j]*a[j,k]*a[i,k]*c[i]^2*c[j]/b[k]", "7/72"},
    // A6-20.2: same dangling-b_k defect as A6-15.1; b_k moved to the denominator.
    {"A6-20.2", 6, 'A', "b[i]*a[l,k]*a[i,l]*c[i]^2*d[k]/b[k]", "13/180"},
    {"A6-20.3", 6, 'A', "b[i]*a[i,k]*a[i,l]*d[k]*c[l]^2/b[k]", "7/180"},
    // additional, order 6, part 3
    {"A6-21.1", 6, 'A', "b[i]*b[j]*a[j,l]*a[l,k]*a[i,k]*c[i]*c[j]/b[k]", "1/18"},
    {"A6-21.2", 6, 'A', "b[i]*b[j]*a[j,l]*a[j,k]*a[i,k]*c[i]*c[l]/b[k]", "7/144"},
    // A6-22.1: printed without any atom tying the l index into the product
    // (and one homogeneity degree short); restoring a factor a_il is the unique
    // single-atom completion satisfied by all order-six collocation schemes.
    {"A6-22.1", 6, 'A', "b[i]*b[j]*a[j,m]*a[i,m]*a[i,l]*c[j]*d[l]/(b[l]*b[m])", "61/720"},
    {"A6-22.2", 6, 'A', "b[i]*a[l,m]*a[i,l]*a[i,k]*d[k]*c[m]/b[k]", "7/360"},
    {"A6-23.1", 6, 'A', "b[i]*a[i,m]*a[m,l]*a[l,k]*c[i]*d[k]/b[k]", "19/720"},
    {"A6-23.2", 6, 'A', "b[i]*a[i,m]*a[i,l]*a[l,k]*d[k]*c[m]/b[k]", "13/360"},
    {"A6-24.1", 6, 'A', "b[i]*a[i,m]*a[i,n]*a[n,l]*d[l]*d[m]/(b[l]*b[m])", "1/18"},
    {"A6-24.2", 6, 'A', "b[i]*a[i,k]*a[m,k]*a[l,m]*c[i]*d[l]/b[k]", "7/360"},
    {"A6-25.1", 6, 'A', "a[n,k]*a[m,n]*a[l,m]*d[k]*d[l]/b[k]", "1/144"},
    // A6-25.2: printed "a_ik" leaves the m index dangling in a single a-atom;
    // a_im is the unique single-atom repair (the colour-swapped mirror of the
    // path shape of A6-25.1) satisfied by all order-six collocation schemes.
    {"A6-25.2", 6, 'A', "b[i]*a[i,m]*a[m,k]*a[l,k]*c[i]*d[l]/b[k]", "13/360"},
    {"A6-26.1", 6, 'A', "a[n,m]*a[m,k]*a[l,k]*d[l]*d[n]/b[k]", "1/72"},
    {"A6-26.2", 6, 'A', "b[i]*a[i,m]*a[i,k]*a[l,k]*d[l]*c[m]/b[k]", "19/720"},
    {"A6-27", 6, 'A', "b[i]*a[i,m]*a[i,l]*a[n,l]*d[m]*d[n]/(b[l]*b[m])", "7/144"},
};

inline std::vector<Condition> build_condition_registry() {
    std::vector<Condition> out;
    for (const auto& spec : kConditionTable) {
        Condition c;
        c.id = spec.id;
        c.order = spec.order;
        c.kind = spec.kind == 'S' ? CondKind::State : CondKind::Additional;
        c.expr = parse_sum_expr(spec.expr);
        c.rhs = Rational::parse(spec.rhs);
        c.text = spec.expr;
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace detail

inline const std::vector<Condition>& condition_registry() {
    static const std::vector<Condition> reg = detail::build_condition_registry();
    return reg;
}

inline const Condition& condition_get(const std::string& id) {
    for (const auto& c : condition_registry())
        if (c.id == id) return c;
    throw ParseError("unknown condition id " + id);
}

/// Evaluation mode: exact field arithmetic, or double with tolerance.
struct EvalMode {
    bool exact = true;
    double tol = 1e-10;
    static EvalMode Exact() { return {true, 0.0}; }
    static EvalMode Float(double tol) { return {false, tol}; }
};

/// Value of one condition on one tableau, with its pass verdict.
struct CondValue {
    QuadNum exact{0};
    double approx = 0.0;
    bool is_exact = true;
    bool pass = false;
    std::string str() const {
        if (is_exact) return exact.str();
        std::ostringstream os;
        os.precision(17);
        os << approx;
        return os.str();
    }
};

namespace detail {

/// Cached per-tableau data for condition evaluation: power tables for b, c, d
/// and inverse powers of b.
template <class Num>
struct EvalCache {
    int s = 0;
    std::vector<std::vector<Num>> A;
    std::vector<std::vector<Num>> bpow, cpow, dpow, binvpow;  // [stage][power]
};

inline QuadNum qn_inv(const QuadNum& x, int stage) {
    if (x.is_zero()) throw ZeroWeight(stage);
    return x.inverse();
}
inline double qn_inv(double x, int stage) {
    if (x == 0.0) throw ZeroWeight(stage);
    return 1.0 / x;
}

template <class Num>
EvalCache<Num> make_cache(int s, const std::vector<std::vector<Num>>& A, const std::vector<Num>& b,
                          const std::vector<Num>& c, const std::vector<Num>& d, int maxpow) {
    EvalCache<Num> cache;
    cache.s = s;
    cache.A = A;
    auto powers = [maxpow](const Num& x) {
        std::vector<Num> p(maxpow + 1, Num(1));
        for (int k = 1; k <= maxpow; ++k) p[k] = p[k - 1] * x;
        return p;
    };
    for (int i = 0; i < s; ++i) {
        cache.bpow.push_back(powers(b[i]));
        cache.cpow.push_back(powers(c[i]));
        cache.dpow.push_back(powers(d[i]));
    }
    return cache;
}

template <class Num>
void add_b_inverses(EvalCache<Num>& cache, const std::vector<Num>& b, int maxpow) {
    for (int i = 0; i < cache.s; ++i) {
        cache.binvpow.push_back({});
        auto& p = cache.binvpow.back();
        p.assign(maxpow + 1, Num(1));
        Num inv = qn_inv(b[i], i);
        for (int k = 1; k <= maxpow; ++k) p[k] = p[k - 1] * inv;
    }
}

template <class Num>
Num eval_expr(const EvalCache<Num>& cache, const SumExpr& e) {
    const int s = cache.s;
    int idx[4] = {0, 0, 0, 0};
    Num total(0);
    const auto tuples = [&]() {
        long n = 1;
        for (int v = 0; v < e.nvars; ++v) n *= s;
        return n;
    }();
    for (long t = 0; t < tuples; ++t) {
        long rem = t;
        for (int v = 0; v < e.nvars; ++v) {
            idx[v] = static_cast<int>(rem % s);
            rem /= s;
        }
        Num term(1);
        for (const auto& a : e.num) {
            switch (a.kind) {
                case 'a': {
                    Num f = cache.A[idx[a.u]][idx[a.v]];
                    for (int k = 0; k < a.power; ++k) term = term * f;
                    break;
                }
                case 'b': term = term * cache.bpow[idx[a.u]][a.power]; break;
                case 'c': term = term * cache.cpow[idx[a.u]][a.power]; break;
                case 'd': term = term * cache.dpow[idx[a.u]][a.power]; break;
            }
        }
        for (const auto& a : e.den) term = term * cache.binvpow[idx[a.u]][a.power];
        total = total + term;
    }
    return total;
}

inline constexpr int kMaxAtomPower = 5;

inline EvalCache<double> float_cache(const Tableau& t) {
    std::vector<std::vector<double>> A(t.s, std::vector<double>(t.s));
    std::vector<double> b(t.s), c(t.s), d(t.s, 0.0);
    for (int i = 0; i < t.s; ++i) {
        b[i] = t.b[i].to_double();
        c[i] = t.c[i].to_double();
        for (int j = 0; j < t.s; ++j) A[i][j] = t.A[i][j].to_double();
    }
    for (int j = 0; j < t.s; ++j)
        for (int i = 0; i < t.s; ++i) d[j] += b[i] * A[i][j];
    return make_cache<double>(t.s, A, b, c, d, kMaxAtomPower);
}

}  // namespace detail

/// Evaluates conditions on one tableau, reusing the power tables across
/// conditions. Inverse weights are only formed for conditions that actually
/// divide by b, so zero weights fault exactly where the spec says they do.
class ConditionEvaluator {
  public:
    ConditionEvaluator(const Tableau& t, EvalMode mode) : mode_(mode) {
        if (mode_.exact) {
            common_radicand(t);  // throws MixedRadicands when the field is not unique
            auto d = compute_d(t);
            exact_ = detail::make_cache<QuadNum>(t.s, t.A, t.b, t.c, d.d, detail::kMaxAtomPower);
            b_exact_ = t.b;
        } else {
            approx_ = detail::float_cache(t);
            b_approx_.resize(t.s);
            for (int i = 0; i < t.s; ++i) b_approx_[i] = t.b[i].to_double();
        }
        rhs_tol_ = mode_.tol;
    }

    CondValue operator()(const Condition& cond) const {
        CondValue out;
        out.is_exact = mode_.exact;
        if (mode_.exact) {
            if (!cond.expr.den.empty() && exact_.binvpow.empty())
                detail::add_b_inverses(exact_, b_exact_, detail::kMaxAtomPower);
            out.exact = detail::eval_expr(exact_, cond.expr);
            out.pass = (out.exact == QuadNum(cond.rhs));
        } else {
            if (!cond.expr.den.empty() && approx_.binvpow.empty())
                detail::add_b_inverses(approx_, b_approx_, detail::kMaxAtomPower);
            out.approx = detail::eval_expr(approx_, cond.expr);
            out.pass = std::abs(out.approx - cond.rhs.to_double()) <= rhs_tol_;
        }
        return out;
    }

  private:
    EvalMode mode_;
    double rhs_tol_ = 1e-10;
    mutable detail::EvalCache<QuadNum> exact_;
    mutable detail::EvalCache<double> approx_;
    std::vector<QuadNum> b_exact_;
    std::vector<double> b_approx_;
};

/// Evaluate one condition on a tableau. Exact mode requires all coefficients
/// to live in one quadratic field (checked via common_radicand) and compares
/// exactly; float mode compares within mode.tol.
inline CondValue eval_condition(const Tableau& t, const Condition& cond, const EvalMode& mode) {
    return ConditionEvaluator(t, mode)(cond);
}

/// State and control (optimal-control) order of a tableau, with the first
/// failing conditions just above each verified order.
struct OrderReport {
    int state_order = 0;
    int control_order = 0;
    struct Failure {
        std::string id;
        std::string value;
        std::string rhs;
    };
    std::vector<Failure> failures;
};

inline OrderReport classify(const Tableau& t, const EvalMode& mode = EvalMode::Exact()) {
    const auto& reg = condition_registry();
    ConditionEvaluator eval(t, mode);
    OrderReport rep;

    std::map<std::string, CondValue> seen;
    auto value_of = [&](const Condition& c) -> const CondValue& {
        auto it = seen.find(c.id);
        if (it == seen.end()) it = seen.emplace(c.id, eval(c)).first;
        return it->second;
    };

    auto first_failure = [&](int order, bool state_only) -> std::optional<OrderReport::Failure> {
        for (const auto& c : reg) {
            if (c.order != order) continue;
            if (state_only && c.kind != CondKind::State) continue;
            const auto& v = value_of(c);
            if (!v.pass) return OrderReport::Failure{c.id, v.str(), c.rhs.str()};
        }
        return std::nullopt;
    };

    auto order_holds = [&](int order, bool state_only) {
        for (const auto& c : reg) {
            if (c.order != order) continue;
            if (state_only && c.kind != CondKind::State) continue;
            if (!value_of(c).pass) return false;
        }
        return true;
    };

    for (int p = 1; p <= 6; ++p) {
        if (!order_holds(p, true)) break;
        rep.state_order = p;
    }
    for (int p = 1; p <= 6; ++p) {
        if (p > rep.state_order || !order_holds(p, false)) break;
        rep.control_order = p;
    }
    if (rep.state_order < 6) {
        if (auto f = first_failure(rep.state_order + 1, true)) rep.failures.push_back(*f);
    }
    if (rep.control_order < 6) {
        if (auto f = first_failure(rep.control_order + 1, false)) {
            if (rep.failures.empty() || rep.failures.front().id != f->id) rep.failures.push_back(*f);
        }
    }
    return rep;
}

/// Maximal (p, eta, zeta) with B(p), C(eta), D(zeta) holding; search capped at
/// p <= 12, eta, zeta <= 6 to keep exotic user tableaux from looping.
struct SimplifyingReport {
    int p_max = 0;
    int eta_max = 0;
    int zeta_max = 0;
};

inline SimplifyingReport check_simplifying(const Tableau& t, const EvalMode& mode = EvalMode::Exact()) {
    SimplifyingReport rep;
    const int s = t.s;
    auto d = compute_d(t);

    if (mode.exact) {
        auto cpow = [&](int i, int q) { return t.c[i].pow(q); };
        for (int q = 1; q <= 12; ++q) {
            QuadNum sum(0);
            for (int i = 0; i < s; ++i) sum += t.b[i] * cpow(i, q - 1);
            if (sum != QuadNum(Rational(1, q))) break;
            rep.p_max = q;
        }
        for (int q = 1; q <= 6; ++q) {
            bool ok = true;
            for (int i = 0; i < s && ok; ++i) {
                QuadNum sum(0);
                for (int j = 0; j < s; ++j) sum += t.A[i][j] * cpow(j, q - 1);
                ok = (sum == cpow(i, q) / QuadNum(static_cast<long>(q)));
            }
            if (!ok) break;
            rep.eta_max = q;
        }
        for (int q = 1; q <= 6; ++q) {
            bool ok = true;
            for (int j = 0; j < s && ok; ++j) {
                QuadNum sum(0);
                for (int i = 0; i < s; ++i) sum += t.b[i] * cpow(i, q - 1) * t.A[i][j];
                ok = (sum == t.b[j] / QuadNum(static_cast<long>(q)) * (QuadNum(1) - cpow(j, q)));
            }
            if (!ok) break;
            rep.zeta_max = q;
        }
        return rep;
    }

    auto cache = detail::float_cache(t);
    const auto& A = cache.A;
    std::vector<double> b(s), c(s);
    for (int i = 0; i < s; ++i) {
        b[i] = t.b[i].to_double();
        c[i] = t.c[i].to_double();
    }
    auto close = [&](double x, double y) { return std::abs(x - y) <= mode.tol; };
    for (int q = 1; q <= 12; ++q) {
        double sum = 0;
        for (int i = 0; i < s; ++i) sum += b[i] * std::pow(c[i], q - 1);
        if (!close(sum, 1.0 / q)) break;
        rep.p_max = q;
    }
    for (int q = 1; q <= 6; ++q) {
        bool ok = true;
        for (int i = 0; i < s && ok; ++i) {
            double sum = 0;
            for (int j = 0; j < s; ++j) sum += A[i][j] * std::pow(c[j], q - 1);
            ok = close(sum, std::pow(c[i], q) / q);
        }
        if (!ok) break;
        rep.eta_max = q;
    }
    for (int q = 1; q <= 6; ++q) {
        bool ok = true;
        for (int j = 0; j < s && ok; ++j) {
            double sum = 0;
            for (int i = 0; i < s; ++i) sum += b[i] * std::pow(c[i], q - 1) * A[i][j];
            ok = close(sum, b[j] / q * (1.0 - std::pow(c[j], q)));
        }
        if (!ok) break;
        rep.zeta_max = q;
    }
    return rep;
}

/// Control order established by the literature for each registry scheme
/// (the SDIRK scheme drops to two; every other scheme keeps its nominal order).
inline int established_control_order(const std::string& name) {
    if (name == "sdirk-4") return 2;
    return registry_get(name).nominal_order;
}

/// Cross-check both registries: every scheme must satisfy every condition up
/// to its established control order. Non-empty output means a suspected
/// transcription defect in either registry.
struct RegistryDefect {
    std::string scheme;
    std::string condition;
    std::string value;
    std::string rhs;
};

inline std::vector<RegistryDefect> validate_registry() {
    std::vector<RegistryDefect> out;
    for (const auto& name : scheme_names()) {
        const auto& t = registry_get(name);
        ConditionEvaluator eval(t, EvalMode::Exact());
        int limit = established_control_order(name);
        for (const auto& c : condition_registry()) {
            if (c.order > limit) continue;
            auto v = eval(c);
            if (!v.pass) out.push_back({name, c.id, v.str(), c.rhs.str()});
        }
    }
    return out;
}

/// Machine-readable dump of the condition registry: id, order, kind,
/// expression, rhs — one tab-separated line per condition.
inline void export_conditions(std::ostream& os) {
    for (const auto& c : condition_registry()) {
        os << c.id << "\t" << c.order << "\t" << (c.kind == CondKind::State ? "state" : "additional")
           << "\t" << c.text << "\t" << c.rhs.str() << "\n";
    }
}

/// State-classified rows whose body carries weight fractions (b-atom
/// denominators); kept as printed, listed here so the split can be audited.
inline std::vector<std::string> state_rows_with_weight_fractions() {
    std::vector<std::string> out;
    for (const auto& c : condition_registry()) {
        if (c.kind == CondKind::State && !c.expr.den.empty()) out.push_back(c.id);
    }
    return out;
}

}  // namespace rkoc
