#ifndef GWAVE_WORD_ALGEBRA_HPP
#define GWAVE_WORD_ALGEBRA_HPP

// Word calculus for C_c(G), G the Deaconu-Renault groupoid of the full
// one-sided shift on n letters. The term s_a s_b* stands for the indicator of
// {(aw, |a| - |b|, bw) : w infinite}; these terms span C_c(G) over the
// cylinder sets, with the single linear relation s_a s_b* = sum_i s_{ai} s_{bi}*.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gwave/error.hpp"
#include "gwave/trig_poly.hpp"

namespace gwave {

/// Letters 1..n; the empty word is allowed.
using Word = std::vector<int>;

inline Word concat(const Word& a, const Word& b) {
    Word out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

inline bool is_prefix(const Word& p, const Word& w) {
    return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

inline std::string word_string(const Word& w) {
    if (w.empty()) return "()";
    std::string s;
    for (int l : w) s += std::to_string(l);
    return s;
}

/// All words of length exactly len over {1..n}, lexicographic.
inline std::vector<Word> words_of_length(int n, int len) {
    std::vector<Word> out{Word{}};
    for (int k = 0; k < len; ++k) {
        std::vector<Word> next;
        for (const auto& w : out)
            for (int i = 1; i <= n; ++i) next.push_back(concat(w, {i}));
        out = std::move(next);
    }
    return out;
}

inline constexpr double kWordPurge = 1e-14;
inline constexpr double kWordEqualityTol = 1e-12;

class WordOp {
public:
    using Key = std::pair<Word, Word>;
    using Terms = std::map<Key, cplx>;

    WordOp() = default;
    explicit WordOp(int n) : n_(n) {
        if (n < 2) throw Error(ErrorCode::BadInput, "alphabet size must be >= 2");
    }

    static WordOp zero(int n) { return WordOp(n); }
    static WordOp identity(int n) { return term(n, {}, {}, 1.0); }
    static WordOp term(int n, const Word& alpha, const Word& beta, cplx c = 1.0) {
        WordOp a(n);
        a.add(alpha, beta, c);
        return a;
    }
    /// s_i = s_i s_()*.
    static WordOp generator(int n, int i) { return term(n, {i}, {}, 1.0); }

    int alphabet_size() const { return n_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    cplx coefficient(const Word& alpha, const Word& beta) const {
        auto it = terms_.find({alpha, beta});
        return it == terms_.end() ? cplx(0.0) : it->second;
    }

    void add(const Word& alpha, const Word& beta, cplx c) {
        check_word(alpha);
        check_word(beta);
        add_unchecked(alpha, beta, c);
    }

    /// Smallest level accepted by normal_form: max over terms of min(|a|, |b|).
    int needed_level() const {
        int lvl = 0;
        for (const auto& [k, c] : terms_)
            lvl = std::max(lvl, static_cast<int>(std::min(k.first.size(), k.second.size())));
        return lvl;
    }

    WordOp& operator+=(const WordOp& o) {
        check_alphabet(o);
        for (const auto& [k, c] : o.terms_) add_unchecked(k.first, k.second, c);
        return *this;
    }
    WordOp& operator-=(const WordOp& o) { return *this += o * cplx(-1.0); }
    WordOp& operator*=(cplx s) {
        Terms old = std::move(terms_);
        terms_.clear();
        for (const auto& [k, c] : old) add_unchecked(k.first, k.second, c * s);
        return *this;
    }

    friend WordOp operator+(WordOp a, const WordOp& b) { return a += b; }
    friend WordOp operator-(WordOp a, const WordOp& b) { return a -= b; }
    friend WordOp operator*(WordOp a, cplx s) { return a *= s; }
    friend WordOp operator*(cplx s, WordOp a) { return a *= s; }
    friend WordOp operator*(WordOp a, double s) { return a *= cplx(s); }
    friend WordOp operator*(double s, WordOp a) { return a *= cplx(s); }

    friend WordOp operator*(const WordOp& a, const WordOp& b) {
        a.check_alphabet(b);
        WordOp out(a.n_);
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) {
                const Word& beta = ka.second;
                const Word& gamma = kb.first;
                if (is_prefix(beta, gamma)) {
                    const Word rest(gamma.begin() + static_cast<std::ptrdiff_t>(beta.size()), gamma.end());
                    out.add_unchecked(concat(ka.first, rest), kb.second, ca * cb);
                } else if (is_prefix(gamma, beta)) {
                    const Word rest(beta.begin() + static_cast<std::ptrdiff_t>(gamma.size()), beta.end());
                    out.add_unchecked(ka.first, concat(kb.second, rest), ca * cb);
                }
            }
        return out;
    }

    void check_alphabet(const WordOp& o) const {
        if (n_ != o.n_)
            throw Error(ErrorCode::AlphabetMismatch,
                        "alphabet sizes " + std::to_string(n_) + " and " + std::to_string(o.n_));
    }

private:
    void check_word(const Word& w) const {
        for (int l : w)
            if (l < 1 || l > n_)
                throw Error(ErrorCode::BadInput, "letter " + std::to_string(l) + " outside 1.." + std::to_string(n_));
    }

    void add_unchecked(const Word& alpha, const Word& beta, cplx c) {
        auto [it, inserted] = terms_.try_emplace({alpha, beta}, c);
        if (!inserted) it->second += c;
        if (std::abs(it->second) <= kWordPurge) terms_.erase(it);
    }

    int n_ = 2;
    Terms terms_;
};

inline WordOp multiply(const WordOp& a, const WordOp& b) { return a * b; }

/// (s_a s_b*)* = s_b s_a*, coefficients conjugated.
inline WordOp adjoint(const WordOp& a) {
    WordOp out(a.alphabet_size());
    for (const auto& [k, c] : a.terms()) out.add(k.second, k.first, std::conj(c));
    return out;
}

/// Refines each term with s_a s_b* = sum_i s_{ai} s_{bi}* until min(|a|, |b|) = level.
inline WordOp normal_form(const WordOp& a, int level) {
    const int need = a.needed_level();
    if (level < need)
        throw Error(ErrorCode::LevelTooSmall,
                    "level " + std::to_string(level) + " below required " + std::to_string(need));
    const int n = a.alphabet_size();
    WordOp out(n);
    for (const auto& [k, c] : a.terms()) {
        const int steps = level - static_cast<int>(std::min(k.first.size(), k.second.size()));
        for (const auto& w : words_of_length(n, steps)) out.add(concat(k.first, w), concat(k.second, w), c);
    }
    return out;
}

inline WordOp normal_form(const WordOp& a) { return normal_form(a, a.needed_level()); }

/// Max coefficient difference of the normal forms at a common level.
inline double word_distance(const WordOp& a, const WordOp& b) {
    a.check_alphabet(b);
    const int level = std::max(a.needed_level(), b.needed_level());
    const WordOp d = normal_form(a, level) - normal_form(b, level);
    double worst = 0.0;
    for (const auto& [k, c] : d.terms()) worst = std::max(worst, std::abs(c));
    return worst;
}

inline bool equal(const WordOp& a, const WordOp& b, double tol = kWordEqualityTol) { return word_distance(a, b) <= tol; }

inline int gauge_degree(const WordOp::Key& k) {
    return static_cast<int>(k.first.size()) - static_cast<int>(k.second.size());
}

/// gamma_z with z = e^{2 pi i t}: term scaled by z^{|a| - |b|}.
inline WordOp gauge(const WordOp& a, double t) {
    WordOp out(a.alphabet_size());
    for (const auto& [k, c] : a.terms()) out.add(k.first, k.second, c * unit_circle(t * gauge_degree(k)));
    return out;
}

/// Projection onto gauge degree 0.
inline WordOp core_expectation(const WordOp& a) {
    WordOp out(a.alphabet_size());
    for (const auto& [k, c] : a.terms())
        if (gauge_degree(k) == 0) out.add(k.first, k.second, c);
    return out;
}

inline bool is_core(const WordOp& a) {
    for (const auto& [k, c] : a.terms())
        if (gauge_degree(k) != 0) return false;
    return true;
}

/// Set of (|a|, |b|) over the nonzero terms.
inline std::set<std::pair<int, int>> filtration_degrees(const WordOp& a) {
    std::set<std::pair<int, int>> out;
    for (const auto& [k, c] : a.terms())
        out.emplace(static_cast<int>(k.first.size()), static_cast<int>(k.second.size()));
    return out;
}

/// S = n^{-1/2} sum_i s_i s_()*.
inline WordOp canonical_isometry(int n) {
    WordOp s(n);
    const double w = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 1; i <= n; ++i) s.add({i}, {}, w);
    return s;
}

namespace detail {
inline void require_core(const WordOp& f) {
    if (!is_core(normal_form(f)))
        throw Error(ErrorCode::NotCore, "element has nonzero gauge degree terms");
}
} // namespace detail

/// alpha(f) = S f S*.
inline WordOp alpha_endo(const WordOp& f) {
    detail::require_core(f);
    const WordOp s = canonical_isometry(f.alphabet_size());
    return s * f * adjoint(s);
}

/// Termwise route: alpha(s_a s_b*) = (1/n) sum_{i,j} s_{ia} s_{jb}*.
inline WordOp alpha_formula(const WordOp& f) {
    detail::require_core(f);
    const int n = f.alphabet_size();
    WordOp out(n);
    for (const auto& [k, c] : f.terms())
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) out.add(concat({i}, k.first), concat({j}, k.second), c / static_cast<double>(n));
    return out;
}

/// L(f) = S* f S.
inline WordOp transfer_L(const WordOp& f) {
    detail::require_core(f);
    const WordOp s = canonical_isometry(f.alphabet_size());
    return adjoint(s) * f * s;
}

/// Termwise route after refining to level >= 1: L(s_{xa} s_{yb}*) = (1/n) s_a s_b*.
inline WordOp transfer_formula(const WordOp& f) {
    detail::require_core(f);
    const int n = f.alphabet_size();
    const WordOp g = normal_form(f, std::max(1, f.needed_level()));
    WordOp out(n);
    for (const auto& [k, c] : g.terms())
        out.add(Word(k.first.begin() + 1, k.first.end()), Word(k.second.begin() + 1, k.second.end()),
                c / static_cast<double>(n));
    return out;
}

struct CpReport {
    double cp1_residual = 0.0;    // S f vs alpha(f) S
    double cp2_residual = 0.0;    // S* f S vs termwise L(f)
    double alpha_residual = 0.0;  // S f S* vs termwise alpha(f)
    bool cp1 = false;
    bool cp2 = false;
    bool alpha_routes = false;
    std::string cp3 = "not checked: involves the compact-operator ideal of the correspondence";

    bool ok() const { return cp1 && cp2 && alpha_routes; }
};

/// Covariance conditions for the pair (S, alpha, L) on a core element.
inline CpReport cp_relations_check(const WordOp& f, int n, double tol = kWordEqualityTol) {
    if (f.alphabet_size() != n)
        throw Error(ErrorCode::AlphabetMismatch,
                    "element over " + std::to_string(f.alphabet_size()) + " letters, expected " + std::to_string(n));
    detail::require_core(f);
    const WordOp s = canonical_isometry(n);
    CpReport rep;
    rep.cp1_residual = word_distance(s * f, alpha_endo(f) * s);
    rep.cp2_residual = word_distance(transfer_L(f), transfer_formula(f));
    rep.alpha_residual = word_distance(alpha_endo(f), alpha_formula(f));
    rep.cp1 = rep.cp1_residual <= tol;
    rep.cp2 = rep.cp2_residual <= tol;
    rep.alpha_routes = rep.alpha_residual <= tol;
    return rep;
}

/// Basis of the core spanned by s_a s_b* with |a| = |b| <= max_len.
inline std::vector<WordOp> core_basis(int n, int max_len) {
    std::vector<WordOp> out;
    for (int len = 0; len <= max_len; ++len) {
        const auto words = words_of_length(n, len);
        for (const auto& a : words)
            for (const auto& b : words) out.push_back(WordOp::term(n, a, b));
    }
    return out;
}

} // namespace gwave

#endif // GWAVE_WORD_ALGEBRA_HPP
