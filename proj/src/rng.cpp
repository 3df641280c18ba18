#include "qarch/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qarch {

double Rng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    // Box-Muller over (0,1] x [0,1); u1 = 0 is excluded to keep log finite.
    double u1;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
}

void Rng::save(std::ostream& os) const {
    os << s_[0] << ' ' << s_[1] << ' ' << s_[2] << ' ' << s_[3] << ' '
       << (has_cached_ ? 1 : 0) << ' ';
    os.precision(17);
    os << cached_ << '\n';
}

void Rng::load(std::istream& is) {
    int cached_flag = 0;
    if (!(is >> s_[0] >> s_[1] >> s_[2] >> s_[3] >> cached_flag >> cached_)) {
        throw std::runtime_error("rng: malformed state");
    }
    has_cached_ = cached_flag != 0;
}

}  // namespace qarch
