#pragma once

// Simulated radio link: hard range cutoff, Bernoulli loss, fixed latency, FIFO
// delivery. Plus the heartbeat failsafe predicate.

#include <cstdint>
#include <optional>
#include <queue>
#include <random>
#include <vector>

#include "skimmer/geometry.hpp"

namespace skimmer {

struct LinkModel {
  double max_range_m = 900.0;
  double base_loss_prob = 0.0;
  double latency_s = 0.05;
  std::uint64_t seed = 7;

  void validate() const;
  friend bool operator==(const LinkModel&, const LinkModel&) = default;
};

/// Delivery decision for one message: the delivery time, or nullopt if dropped.
/// Beyond max_range_m a message is always dropped. Exactly one uniform draw is
/// consumed per call so the loss sequence depends only on the call count.
std::optional<double> link_transfer(const LinkModel& link, std::mt19937_64& rng, Vec2 sender_pos,
                                    Vec2 receiver_pos, double now_s);

inline constexpr double kDefaultFailsafeTimeoutS = 2.0;

/// True when the heartbeat gap strictly exceeds the timeout.
inline bool failsafe_check(double last_heartbeat_s, double now_s,
                           double timeout_s = kDefaultFailsafeTimeoutS) {
  return now_s - last_heartbeat_s > timeout_s;
}

struct LinkStats {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;  // handed to the receiver by poll()
  std::uint64_t dropped = 0;
  friend bool operator==(const LinkStats&, const LinkStats&) = default;
};

/// One direction of the link, carrying payloads of type T. Delivery order is
/// (delivery time, send order), so one sender's messages stay FIFO.
template <class T>
class LinkChannel {
 public:
  LinkChannel(const LinkModel& model, std::uint64_t stream)
      : model_(model), rng_(model.seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1))) {}

  bool send(T payload, Vec2 sender_pos, Vec2 receiver_pos, double now_s) {
    ++stats_.sent;
    const auto at = link_transfer(model_, rng_, sender_pos, receiver_pos, now_s);
    if (!at) {
      ++stats_.dropped;
      return false;
    }
    queue_.push(Pending{*at, order_++, std::move(payload)});
    return true;
  }

  /// Removes and returns every payload due at or before `now_s`.
  std::vector<T> poll(double now_s) {
    std::vector<T> due;
    while (!queue_.empty() && queue_.top().deliver_at_s <= now_s + 1e-9) {
      due.push_back(std::move(const_cast<Pending&>(queue_.top()).payload));
      queue_.pop();
    }
    stats_.delivered += due.size();
    return due;
  }

  const LinkStats& stats() const { return stats_; }
  std::size_t in_flight() const { return queue_.size(); }

 private:
  struct Pending {
    double deliver_at_s;
    std::uint64_t order;
    T payload;
  };
  struct Later {
    bool operator()(const Pending& a, const Pending& b) const {
      if (a.deliver_at_s != b.deliver_at_s) return a.deliver_at_s > b.deliver_at_s;
      return a.order > b.order;
    }
  };

  LinkModel model_;
  std::mt19937_64 rng_;
  std::priority_queue<Pending, std::vector<Pending>, Later> queue_;
  std::uint64_t order_ = 0;
  LinkStats stats_;
};

}  // namespace skimmer
