#pragma once

namespace airmax {

/// IEEE binary128. The analog receivers accumulate and de-scale in it so that
/// states close to S_min survive the affine map alpha x + beta.
using Wide = __float128;

Wide wide_sqrt(Wide v);
Wide wide_fabs(Wide v);

/// Neumaier summation in binary128.
class WideSum {
public:
    void add(Wide v) {
        const Wide t = sum_ + v;
        if (wide_fabs(sum_) >= wide_fabs(v))
            carry_ += (sum_ - t) + v;
        else
            carry_ += (v - t) + sum_;
        sum_ = t;
    }
    Wide value() const { return sum_ + carry_; }

private:
    Wide sum_ = 0;
    Wide carry_ = 0;
};

}  // namespace airmax
