#pragma once

// Backlund transformations of PIII' realising the extended affine Weyl group
// of type B2(1): reflections s0, s1, s2 acting on (v, t, q, p), words over
// them, and the translations T1 = s0 s2 s1 s2, T2 = s2 s0 s2 s1.
//
// Words act on points letter by letter from the left: in T1 = s0 s2 s1 s2 the
// leading s0 is applied first. This is the order under which
// T1.(v1, v2) = (v1 + 1, v2 + 1) and T2.(v1, v2) = (v1 + 1, v2 - 1).

#include <algorithm>
#include <cstdlib>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "painleve/core.hpp"
#include "painleve/error.hpp"
#include "painleve/jet.hpp"

namespace painleve {

enum class Generator { s0, s1, s2 };

inline std::string_view to_string(Generator g) {
    switch (g) {
    case Generator::s0: return "s0";
    case Generator::s1: return "s1";
    case Generator::s2: return "s2";
    }
    return "?";
}

struct GeneratorWord {
    std::vector<Generator> letters;

    bool empty() const noexcept { return letters.empty(); }
    std::size_t size() const noexcept { return letters.size(); }

    std::size_t count(Generator g) const {
        return static_cast<std::size_t>(std::count(letters.begin(), letters.end(), g));
    }

    /// Word acting as the inverse map (generators are involutions).
    GeneratorWord inverse() const { return {{letters.rbegin(), letters.rend()}}; }

    GeneratorWord operator*(const GeneratorWord& rhs) const {
        GeneratorWord w = *this;
        w.letters.insert(w.letters.end(), rhs.letters.begin(), rhs.letters.end());
        return w;
    }

    friend bool operator==(const GeneratorWord&, const GeneratorWord&) = default;

    std::string str() const {
        std::string out;
        for (auto g : letters) {
            if (!out.empty()) out += ' ';
            out += to_string(g);
        }
        return out;
    }

    /// Parses whitespace-separated letters, e.g. "s0 s2 s1 s2"; also accepts
    /// the shorthands "T1", "T2" and their inverses "T1^-1", "T2^-1".
    static GeneratorWord parse(std::string_view text);
};

inline GeneratorWord word_T1() { return {{Generator::s0, Generator::s2, Generator::s1, Generator::s2}}; }
inline GeneratorWord word_T2() { return {{Generator::s2, Generator::s0, Generator::s2, Generator::s1}}; }

inline GeneratorWord GeneratorWord::parse(std::string_view text) {
    GeneratorWord w;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
        if (tok == "s0") w.letters.push_back(Generator::s0);
        else if (tok == "s1") w.letters.push_back(Generator::s1);
        else if (tok == "s2") w.letters.push_back(Generator::s2);
        else if (tok == "T1") w = w * word_T1();
        else if (tok == "T2") w = w * word_T2();
        else if (tok == "T1^-1") w = w * word_T1().inverse();
        else if (tok == "T2^-1") w = w * word_T2().inverse();
        else throw Error(ErrorKind::ConfigError, "unknown generator '" + tok + "'");
    }
    return w;
}

/// Word for T1^a T2^b: v -> (v1 + a + b, v2 + a - b).
inline GeneratorWord shift(const ParameterPoint& /*v*/, int a, int b) {
    GeneratorWord w;
    const GeneratorWord t1 = a >= 0 ? word_T1() : word_T1().inverse();
    const GeneratorWord t2 = b >= 0 ? word_T2() : word_T2().inverse();
    for (int i = 0; i < std::abs(a); ++i) w = w * t1;
    for (int i = 0; i < std::abs(b); ++i) w = w * t2;
    return w;
}

inline ParameterPoint act_on_params(Generator g, const ParameterPoint& v) {
    switch (g) {
    case Generator::s0: return {-1.0 - v.v2, -1.0 - v.v1};
    case Generator::s1: return {v.v2, v.v1};
    case Generator::s2: return {v.v1, -v.v2};
    }
    return v;
}

inline ParameterPoint act_on_params(const GeneratorWord& w, ParameterPoint v) {
    for (auto g : w.letters) v = act_on_params(g, v);
    return v;
}

/// Image of (v, t, q, p) under one or more letters; S is a scalar or a jet.
template <class S>
struct WeylImage {
    ParameterPoint params;
    S t, q, p;
    int t_sign = 1;
};

template <class S>
WeylImage<S> act(Generator g, const ParameterPoint& v, const S& t, const S& q, const S& p, int letter = 0) {
    switch (g) {
    case Generator::s0: {
        if (value_of(q) == Complex{})
            throw Error(ErrorKind::SingularPoint, "s0 needs q != 0", letter);
        S p_out = (q / t) * (q * (p - 1.0) - 0.5 * (v.v1 - v.v2)) + 1.0;
        S q_out = -t / q;
        return {act_on_params(g, v), t, q_out, p_out, 1};
    }
    case Generator::s1: {
        if (value_of(p) == Complex{1.0})
            throw Error(ErrorKind::SingularPoint, "s1 needs p != 1", letter);
        S q_out = q + (v.v2 - v.v1) / (2.0 * (p - 1.0));
        return {act_on_params(g, v), t, q_out, p, 1};
    }
    case Generator::s2:
        return {act_on_params(g, v), -t, -q, 1.0 - p, -1};
    }
    return {v, t, q, p, 1};
}

template <class S>
WeylImage<S> act(const GeneratorWord& w, const ParameterPoint& v, const S& t, const S& q, const S& p) {
    WeylImage<S> img{v, t, q, p, 1};
    for (std::size_t k = 0; k < w.letters.size(); ++k) {
        auto next = act(w.letters[k], img.params, img.t, img.q, img.p, static_cast<int>(k));
        next.t_sign *= img.t_sign;
        img = next;
    }
    return img;
}

struct WeylMapResult {
    ParameterPoint params_out;
    CanonicalState state_out;
    int t_sign = 1;
};

inline WeylMapResult apply_generator(Generator g, const ParameterPoint& v, const CanonicalState& s) {
    auto img = act(g, v, s.t, s.q, s.p);
    return {img.params, {img.t, img.q, img.p}, img.t_sign};
}

inline WeylMapResult apply_word(const GeneratorWord& w, const ParameterPoint& v, const CanonicalState& s) {
    auto img = act(w, v, s.t, s.q, s.p);
    return {img.params, {img.t, img.q, img.p}, img.t_sign};
}

/// Pushes the solution jet at (v, s) through the word by the chain rule and
/// returns the largest target equation-of-motion residual. Zero (to rounding)
/// exactly when the word maps solutions to solutions at this point.
inline double pushforward_check(const GeneratorWord& w, const ParameterPoint& v, const CanonicalState& s) {
    require_nonzero_t(s.t);
    using J = Jet<Complex, 1>;
    auto [dq, dp] = eom(v, s.t, s.q, s.p);
    auto img = act(w, v, J::variable(s.t), J::from_coefficients({s.q, dq}), J::from_coefficients({s.p, dp}));
    const Complex dT = img.t[1]; // +-1
    const Complex dQ = img.q[1] / dT;
    const Complex dP = img.p[1] / dT;
    auto [fq, fp] = eom(img.params, img.t.value(), img.q.value(), img.p.value());
    return std::max(std::abs(dQ - fq), std::abs(dP - fp));
}

} // namespace painleve
