#pragma once

#include <initializer_list>
#include <vector>

namespace lspline {

enum class Trig { None, Cos, Sin };

/// One term  scale * t^power * exp(rate*t) * {1, cos(freq*t), sin(freq*t)}.
///
/// The family is closed under differentiation: the derivative of a term is a
/// finite sum of terms of the same form.
struct ExpPolyTerm {
    int power = 0;
    double rate = 0.0;
    Trig trig = Trig::None;
    double freq = 0.0;
    double scale = 1.0;

    double operator()(double t) const;
    std::vector<ExpPolyTerm> derivative() const;
};

/// Finite sum of ExpPolyTerm with like terms merged.
class ExpPolySum {
public:
    ExpPolySum() = default;
    ExpPolySum(std::initializer_list<ExpPolyTerm> terms);
    explicit ExpPolySum(std::vector<ExpPolyTerm> terms);

    double operator()(double t) const;
    ExpPolySum derivative() const;

    const std::vector<ExpPolyTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

private:
    void merge_like_terms();

    std::vector<ExpPolyTerm> terms_;
};

}  // namespace lspline
