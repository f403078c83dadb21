#include "liqsim/rng.hpp"

#include "liqsim/gaussian.hpp"

namespace liqsim::rng {

double CounterStream::normal_at(std::uint64_t counter) const {
  return gaussian::std_normal_inv_cdf(uniform_at(counter));
}

}  // namespace liqsim::rng
