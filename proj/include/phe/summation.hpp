#pragma once

#include <cmath>
#include <cstddef>

namespace phe {

/// Neumaier-compensated accumulator. Addition order still matters for the
/// last bits, so callers that need bit-stable results must feed it in a
/// fixed order.
class KahanSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    KahanSum& operator+=(double x) {
        add(x);
        return *this;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

template <typename It, typename F>
double compensated_sum(It first, It last, F&& term) {
    KahanSum s;
    for (; first != last; ++first) s.add(term(*first));
    return s.value();
}

}  // namespace phe
