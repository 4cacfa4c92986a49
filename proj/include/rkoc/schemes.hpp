#pragma once

#include <map>
#include <string>
#include <vector>

#include "rkoc/tableau.hpp"

namespace rkoc {

namespace detail {

// p/q
inline QuadNum fr(long p, long q = 1) { return QuadNum(Rational(p, q)); }
// (p + r*sqrt{d})/q
inline QuadNum rd(long p, long r, long q, unsigned long d) {
    return QuadNum(Rational(p, q), Rational(r, q), d);
}

inline Tableau make(std::string name, int order, std::vector<std::vector<QuadNum>> A,
                    std::vector<QuadNum> b, std::vector<QuadNum> c) {
    Tableau t;
    t.name = std::move(name);
    t.nominal_order = order;
    t.s = static_cast<int>(b.size());
    t.A = std::move(A);
    t.b = std::move(b);
    t.c = std::move(c);
    auto bad = validate(t);
    if (!bad.empty()) throw ParseError("registry scheme " + t.name + " violates " + bad.front().describe());
    return t;
}

inline std::map<std::string, Tableau> build_registry() {
    std::map<std::string, Tableau> reg;
    auto put = [&reg](Tableau t) { reg.emplace(t.name, std::move(t)); };

    put(make("stormer-verlet", 2,
             {{fr(0), fr(0)}, {fr(1, 2), fr(1, 2)}},
             {fr(1, 2), fr(1, 2)},
             {fr(0), fr(1)}));

    put(make("radau-ia-3", 3,
             {{fr(1, 4), fr(-1, 4)}, {fr(1, 4), fr(5, 12)}},
             {fr(1, 4), fr(3, 4)},
             {fr(0), fr(2, 3)}));

    put(make("radau-iia-3", 3,
             {{fr(5, 12), fr(-1, 12)}, {fr(3, 4), fr(1, 4)}},
             {fr(3, 4), fr(1, 4)},
             {fr(1, 3), fr(1)}));

    put(make("gauss-4", 4,
             {{fr(1, 4), rd(3, -2, 12, 3)}, {rd(3, 2, 12, 3), fr(1, 4)}},
             {fr(1, 2), fr(1, 2)},
             {rd(6, -2, 12, 3), rd(6, 2, 12, 3)}));

    put(make("sdirk-4", 4,
             {{fr(1, 4), fr(0), fr(0), fr(0), fr(0)},
              {fr(1, 2), fr(1, 4), fr(0), fr(0), fr(0)},
              {fr(17, 50), fr(-1, 25), fr(1, 4), fr(0), fr(0)},
              {fr(371, 1360), fr(-137, 2720), fr(15, 544), fr(1, 4), fr(0)},
              {fr(25, 24), fr(-49, 48), fr(125, 16), fr(-85, 12), fr(1, 4)}},
             {fr(25, 24), fr(-49, 48), fr(125, 16), fr(-85, 12), fr(1, 4)},
             {fr(1, 4), fr(3, 4), fr(11, 20), fr(1, 2), fr(1)}));

    put(make("lobatto-iiia-4", 4,
             {{fr(0), fr(0), fr(0)},
              {fr(5, 24), fr(1, 3), fr(-1, 24)},
              {fr(1, 6), fr(2, 3), fr(1, 6)}},
             {fr(1, 6), fr(2, 3), fr(1, 6)},
             {fr(0), fr(1, 2), fr(1)}));

    put(make("lobatto-iiib-4", 4,
             {{fr(1, 6), fr(-1, 6), fr(0)},
              {fr(1, 6), fr(1, 3), fr(0)},
              {fr(1, 6), fr(5, 6), fr(0)}},
             {fr(1, 6), fr(2, 3), fr(1, 6)},
             {fr(0), fr(1, 2), fr(1)}));

    put(make("lobatto-iiic-4", 4,
             {{fr(1, 6), fr(-1, 3), fr(1, 6)},
              {fr(1, 6), fr(5, 12), fr(-1, 12)},
              {fr(1, 6), fr(2, 3), fr(1, 6)}},
             {fr(1, 6), fr(2, 3), fr(1, 6)},
             {fr(0), fr(1, 2), fr(1)}));

    put(make("radau-ia-5", 5,
             {{fr(1, 9), rd(-1, -1, 18, 6), rd(-1, 1, 18, 6)},
              {fr(1, 9), rd(88, 7, 360, 6), rd(88, -43, 360, 6)},
              {fr(1, 9), rd(88, 43, 360, 6), rd(88, -7, 360, 6)}},
             {fr(1, 9), rd(16, 1, 36, 6), rd(16, -1, 36, 6)},
             {fr(0), rd(6, -1, 10, 6), rd(6, 1, 10, 6)}));

    put(make("radau-iia-5", 5,
             {{rd(88, -7, 360, 6), rd(296, -169, 1800, 6), rd(-2, 3, 225, 6)},
              {rd(296, 169, 1800, 6), rd(88, 7, 360, 6), rd(-2, -3, 225, 6)},
              {rd(16, -1, 36, 6), rd(16, 1, 36, 6), fr(1, 9)}},
             {rd(16, -1, 36, 6), rd(16, 1, 36, 6), fr(1, 9)},
             {rd(4, -1, 10, 6), rd(4, 1, 10, 6), fr(1)}));

    put(make("gauss-6", 6,
             {{fr(5, 36), rd(10, -3, 45, 15), rd(25, -6, 180, 15)},
              {rd(10, 3, 72, 15), fr(2, 9), rd(10, -3, 72, 15)},
              {rd(25, 6, 180, 15), rd(10, 3, 45, 15), fr(5, 36)}},
             {fr(5, 18), fr(4, 9), fr(5, 18)},
             {rd(5, -1, 10, 15), fr(1, 2), rd(5, 1, 10, 15)}));

    // The paper's Lobatto IIIA entry a_33 prints as "25-+sqrt5"; (25+sqrt5)/120 is
    // the unique value restoring the row sum c_3 = (5+sqrt5)/10.
    put(make("lobatto-iiia-6", 6,
             {{fr(0), fr(0), fr(0), fr(0)},
              {rd(11, 1, 120, 5), rd(25, -1, 120, 5), rd(25, -13, 120, 5), rd(-1, 1, 120, 5)},
              {rd(11, -1, 120, 5), rd(25, 13, 120, 5), rd(25, 1, 120, 5), rd(-1, -1, 120, 5)},
              {fr(1, 12), fr(5, 12), fr(5, 12), fr(1, 12)}},
             {fr(1, 12), fr(5, 12), fr(5, 12), fr(1, 12)},
             {fr(0), rd(5, -1, 10, 5), rd(5, 1, 10, 5), fr(1)}));

    put(make("lobatto-iiib-6", 6,
             {{fr(1, 12), rd(-1, -1, 24, 5), rd(-1, 1, 24, 5), fr(0)},
              {fr(1, 12), rd(25, 1, 120, 5), rd(25, -13, 120, 5), fr(0)},
              {fr(1, 12), rd(25, 13, 120, 5), rd(25, -1, 120, 5), fr(0)},
              {fr(1, 12), rd(11, -1, 24, 5), rd(11, 1, 24, 5), fr(0)}},
             {fr(1, 12), fr(5, 12), fr(5, 12), fr(1, 12)},
             {fr(0), rd(5, -1, 10, 5), rd(5, 1, 10, 5), fr(1)}));

    put(make("lobatto-iiic-6", 6,
             {{fr(1, 12), rd(0, -1, 12, 5), rd(0, 1, 12, 5), fr(-1, 12)},
              {fr(1, 12), fr(1, 4), rd(10, -7, 60, 5), rd(0, 1, 60, 5)},
              {fr(1, 12), rd(10, 7, 60, 5), fr(1, 4), rd(0, -1, 60, 5)},
              {fr(1, 12), fr(5, 12), fr(5, 12), fr(1, 12)}},
             {fr(1, 12), fr(5, 12), fr(5, 12), fr(1, 12)},
             {fr(0), rd(5, -1, 10, 5), rd(5, 1, 10, 5), fr(1)}));

    return reg;
}

}  // namespace detail

inline const std::map<std::string, Tableau>& scheme_registry() {
    static const std::map<std::string, Tableau> reg = detail::build_registry();
    return reg;
}

inline std::vector<std::string> scheme_names() {
    std::vector<std::string> out;
    for (const auto& [name, t] : scheme_registry()) out.push_back(name);
    return out;
}

inline const Tableau& registry_get(const std::string& name) {
    const auto& reg = scheme_registry();
    auto it = reg.find(name);
    if (it == reg.end()) throw UnknownScheme(name);
    return it->second;
}

}  // namespace rkoc
