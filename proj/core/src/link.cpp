#include "skimmer/link.hpp"

#include <cmath>

#include "skimmer/vessel_dynamics.hpp"

namespace skimmer {

void LinkModel::validate() const {
  if (!(max_range_m > 0.0) || !std::isfinite(max_range_m)) {
    throw InvalidParams("link max_range_m must be > 0");
  }
  if (!(base_loss_prob >= 0.0 && base_loss_prob <= 1.0)) {
    throw InvalidParams("link base_loss_prob must lie in [0, 1]");
  }
  if (!(latency_s >= 0.0) || !std::isfinite(latency_s)) {
    throw InvalidParams("link latency_s must be >= 0");
  }
}

std::optional<double> link_transfer(const LinkModel& link, std::mt19937_64& rng, Vec2 sender_pos,
                                    Vec2 receiver_pos, double now_s) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (distance(sender_pos, receiver_pos) > link.max_range_m) {
    return std::nullopt;
  }
  if (u < link.base_loss_prob) {
    return std::nullopt;
  }
  return now_s + link.latency_s;
}

}  // namespace skimmer
