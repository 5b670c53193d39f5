////////////////////////////////////////////////////////////////////////////////
// numeric.hpp
//
// Small numeric helpers shared by the energy/functional code: compensated
// accumulation for long sums and the signed power used by the model
// nonlinearities.
////////////////////////////////////////////////////////////////////////////////
#ifndef SGSOLVER_NUMERIC_HPP
#define SGSOLVER_NUMERIC_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace sg {

// Neumaier variant of Kahan summation. Deterministic for a fixed visit order.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// sign(t) * |t|^p with the convention that the value at t = 0 is 0
// (also for p = 0, where the plain power would be 1).
inline double sgn_pow(double t, double p) {
    if (t == 0.0) return 0.0;
    double m = std::pow(std::abs(t), p);
    return t > 0.0 ? m : -m;
}

inline bool rel_close(double a, double b, double rel, double abs_floor = 0.0) {
    double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= std::max(rel * scale, abs_floor);
}

inline void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

} // namespace sg

#endif
