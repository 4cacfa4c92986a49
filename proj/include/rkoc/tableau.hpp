#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rkoc/errors.hpp"
#include "rkoc/quadnum.hpp"

namespace rkoc {

/// A Butcher array (A, b, c) with exact coefficients.
///
/// nominal_order is literature metadata (the classical ODE order quoted for the
/// scheme); verified orders come from the condition engine and the two are
/// cross-checked in tests, never conflated.
struct Tableau {
    std::string name;
    int nominal_order = 0;
    int s = 0;
    std::vector<std::vector<QuadNum>> A;
    std::vector<QuadNum> b;
    std::vector<QuadNum> c;
};

/// d_j = sum_i b_i a_ij.
struct DVector {
    std::vector<QuadNum> d;
};

inline DVector compute_d(const Tableau& t) {
    DVector out;
    out.d.assign(t.s, QuadNum(0));
    for (int j = 0; j < t.s; ++j) {
        for (int i = 0; i < t.s; ++i) out.d[j] += t.b[i] * t.A[i][j];
    }
    return out;
}

/// One violated construction invariant.
struct TableauViolation {
    enum class Kind { RowSumMismatch, WeightSumNotOne, ShapeMismatch, MixedRadicandSet } kind;
    int row = -1;  // for RowSumMismatch (0-based)
    std::string describe() const {
        switch (kind) {
            case Kind::RowSumMismatch: return "RowSumMismatch(row " + std::to_string(row + 1) + ")";
            case Kind::WeightSumNotOne: return "WeightSumNotOne";
            case Kind::ShapeMismatch: return "ShapeMismatch";
            case Kind::MixedRadicandSet: return "MixedRadicandSet";
        }
        return "?";
    }
};

/// Check c_i = sum_j a_ij and sum_i b_i = 1; empty report means valid.
inline std::vector<TableauViolation> validate(const Tableau& t) {
    std::vector<TableauViolation> out;
    if (static_cast<int>(t.A.size()) != t.s || static_cast<int>(t.b.size()) != t.s ||
        static_cast<int>(t.c.size()) != t.s) {
        out.push_back({TableauViolation::Kind::ShapeMismatch, -1});
        return out;
    }
    for (int i = 0; i < t.s; ++i) {
        if (static_cast<int>(t.A[i].size()) != t.s) {
            out.push_back({TableauViolation::Kind::ShapeMismatch, i});
            return out;
        }
    }
    try {
        for (int i = 0; i < t.s; ++i) {
            QuadNum row(0);
            for (int j = 0; j < t.s; ++j) row += t.A[i][j];
            if (row != t.c[i]) out.push_back({TableauViolation::Kind::RowSumMismatch, i});
        }
        QuadNum wsum(0);
        for (const auto& w : t.b) wsum += w;
        if (wsum != QuadNum(1)) out.push_back({TableauViolation::Kind::WeightSumNotOne, -1});
    } catch (const MixedRadicands&) {
        out.push_back({TableauViolation::Kind::MixedRadicandSet, -1});
    }
    return out;
}

/// Common radicand of all coefficients (0 when everything is rational).
/// Throws MixedRadicands if two distinct nonzero radicands occur.
inline unsigned long common_radicand(const Tableau& t) {
    unsigned long d = 0;
    auto take = [&d](const QuadNum& x) {
        if (x.radicand() == 0) return;
        if (d == 0) d = x.radicand();
        else if (d != x.radicand()) throw MixedRadicands(d, x.radicand());
    };
    for (const auto& row : t.A)
        for (const auto& x : row) take(x);
    for (const auto& x : t.b) take(x);
    for (const auto& x : t.c) take(x);
    return d;
}

/// Adjoint coefficients of the symplectic partner scheme:
///   bhat_i = b_i,   ahat_ij = b_j - (b_j/b_i) a_ji,
/// with chat recomputed as row sums. Requires all b_i != 0.
inline Tableau adjoint_tableau(const Tableau& t) {
    for (int i = 0; i < t.s; ++i) {
        if (t.b[i].is_zero()) throw ZeroWeight(i);
    }
    Tableau out;
    out.name = t.name + "-adjoint";
    out.nominal_order = t.nominal_order;
    out.s = t.s;
    out.A.assign(t.s, std::vector<QuadNum>(t.s, QuadNum(0)));
    out.b = t.b;
    out.c.assign(t.s, QuadNum(0));
    for (int i = 0; i < t.s; ++i) {
        for (int j = 0; j < t.s; ++j) {
            out.A[i][j] = t.b[j] - t.b[j] / t.b[i] * t.A[j][i];
            out.c[i] += out.A[i][j];
        }
    }
    return out;
}

inline bool same_coefficients(const Tableau& x, const Tableau& y) {
    if (x.s != y.s) return false;
    for (int i = 0; i < x.s; ++i) {
        if (x.b[i] != y.b[i] || x.c[i] != y.c[i]) return false;
        for (int j = 0; j < x.s; ++j) {
            if (x.A[i][j] != y.A[i][j]) return false;
        }
    }
    return true;
}

/// Text format: line 1 "s d", then s rows of A, then b, then c.
/// Coefficients as "p/q" or "(p+r*sqrt{d})/q".
inline std::string to_text(const Tableau& t) {
    std::ostringstream os;
    os << t.s << " " << common_radicand(t) << "\n";
    auto line = [&os](const std::vector<QuadNum>& xs) {
        for (std::size_t j = 0; j < xs.size(); ++j) os << (j ? " " : "") << xs[j].str();
        os << "\n";
    };
    for (const auto& row : t.A) line(row);
    line(t.b);
    line(t.c);
    return os.str();
}

inline Tableau from_text(std::istream& in, const std::string& name = "user") {
    int s = 0;
    unsigned long d = 0;
    if (!(in >> s >> d) || s < 1) throw ParseError("bad tableau header (want 's d')");
    if (!detail::is_square_free(d)) throw ParseError("radicand is not square-free");
    auto coeff = [&in, d](const char* what) {
        std::string tok;
        if (!(in >> tok)) throw ParseError(std::string("missing ") + what);
        QuadNum x = QuadNum::parse(tok);
        if (x.radicand() != 0 && x.radicand() != d) throw MixedRadicands(d, x.radicand());
        return x;
    };
    Tableau t;
    t.name = name;
    t.s = s;
    t.A.assign(s, std::vector<QuadNum>(s, QuadNum(0)));
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) t.A[i][j] = coeff("A entry");
    t.b.assign(s, QuadNum(0));
    for (int i = 0; i < s; ++i) t.b[i] = coeff("b entry");
    t.c.assign(s, QuadNum(0));
    for (int i = 0; i < s; ++i) t.c[i] = coeff("c entry");
    return t;
}

inline Tableau from_text(const std::string& text, const std::string& name = "user") {
    std::istringstream is(text);
    return from_text(is, name);
}

}  // namespace rkoc
