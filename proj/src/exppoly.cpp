#include "lspline/exppoly.hpp"

#include <algorithm>
#include <cmath>

namespace lspline {

double ExpPolyTerm::operator()(double t) const {
    double v = scale;
    if (power > 0) v *= std::pow(t, power);
    if (rate != 0.0) v *= std::exp(rate * t);
    switch (trig) {
        case Trig::None: break;
        case Trig::Cos: v *= std::cos(freq * t); break;
        case Trig::Sin: v *= std::sin(freq * t); break;
    }
    return v;
}

std::vector<ExpPolyTerm> ExpPolyTerm::derivative() const {
    std::vector<ExpPolyTerm> out;
    // d/dt [t^k e^{at}] contributes k t^{k-1} e^{at} + a t^k e^{at}.
    if (power > 0) {
        ExpPolyTerm d = *this;
        d.power = power - 1;
        d.scale = scale * power;
        out.push_back(d);
    }
    if (rate != 0.0) {
        ExpPolyTerm d = *this;
        d.scale = scale * rate;
        out.push_back(d);
    }
    // Trig factor: cos -> -freq sin, sin -> freq cos.
    if (trig == Trig::Cos && freq != 0.0) {
        ExpPolyTerm d = *this;
        d.trig = Trig::Sin;
        d.scale = -scale * freq;
        out.push_back(d);
    } else if (trig == Trig::Sin && freq != 0.0) {
        ExpPolyTerm d = *this;
        d.trig = Trig::Cos;
        d.scale = scale * freq;
        out.push_back(d);
    }
    return out;
}

ExpPolySum::ExpPolySum(std::initializer_list<ExpPolyTerm> terms)
    : terms_(terms) {
    merge_like_terms();
}

ExpPolySum::ExpPolySum(std::vector<ExpPolyTerm> terms)
    : terms_(std::move(terms)) {
    merge_like_terms();
}

double ExpPolySum::operator()(double t) const {
    double v = 0.0;
    for (const auto& term : terms_) v += term(t);
    return v;
}

ExpPolySum ExpPolySum::derivative() const {
    std::vector<ExpPolyTerm> out;
    for (const auto& term : terms_) {
        auto d = term.derivative();
        out.insert(out.end(), d.begin(), d.end());
    }
    return ExpPolySum(std::move(out));
}

void ExpPolySum::merge_like_terms() {
    auto key_less = [](const ExpPolyTerm& x, const ExpPolyTerm& y) {
        if (x.power != y.power) return x.power < y.power;
        if (x.rate != y.rate) return x.rate < y.rate;
        if (x.trig != y.trig) return x.trig < y.trig;
        return x.freq < y.freq;
    };
    auto same_key = [](const ExpPolyTerm& x, const ExpPolyTerm& y) {
        return x.power == y.power && x.rate == y.rate && x.trig == y.trig &&
               x.freq == y.freq;
    };
    std::sort(terms_.begin(), terms_.end(), key_less);
    std::vector<ExpPolyTerm> merged;
    for (const auto& term : terms_) {
        if (!merged.empty() && same_key(merged.back(), term)) {
            merged.back().scale += term.scale;
        } else {
            merged.push_back(term);
        }
    }
    std::erase_if(merged, [](const ExpPolyTerm& t) { return t.scale == 0.0; });
    terms_ = std::move(merged);
}

}  // namespace lspline
