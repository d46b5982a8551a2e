#pragma once

#include "story/focus.hpp"
#include "story/memory.hpp"

namespace story {

// One shadow: a weighted body of same-kind memory items plus the local
// environment-resource pool. Body keys are raw InstanceId/ViId values.
struct Shadow {
    std::map<std::uint64_t, double> body;
    double pool = 0.0;

    double mass() const {
        double s = 0.0;
        for (const auto& [id, w] : body) s += w;
        return s;
    }
    double weight(std::uint64_t id) const {
        auto it = body.find(id);
        return it == body.end() ? 0.0 : it->second;
    }
};

struct TickReport {
    int substeps = 0;
    double total_abs_delta = 0.0;
    std::map<InstanceId, double> instance_abs_delta;
    std::map<ViId, double> vi_abs_delta;
};

// The individual diffusion activities, exposed for direct testing. Each one
// applies a single Euler step of its law; tick() composes them per substep.
namespace da {

// w *= exp(-lambda dt); the released mass joins the pool.
void decay(Shadow& s, double lambda, double dt, double* abs_delta = nullptr);

// Transfers T = min(pool, kappa dt * sum g) from the pool, split g-proportionally.
// Absent entries are seeded at zero; clamp overflow at 1 returns to the pool.
void match(Shadow& s, const std::vector<std::pair<std::uint64_t, double>>& gains,
           double kappa, double dt, double* abs_delta = nullptr);

// Pulls p and the aligned part participations toward their common mean:
// delta = kappa dt (mean({p} u q) - p)/2; p += delta, each q_i -= delta/n.
// Conserves p + sum(q) exactly; bounds respected by shrinking delta.
void consistency(double& p, std::vector<double*>& q, double kappa, double dt,
                 double* moved = nullptr);

// w_i += kappa dt w_i (w_i - mean), then rescaled so the sum is unchanged;
// clamp overflow redistributed proportionally.
void sharpening(std::vector<double*>& ws, double kappa, double dt,
                double* abs_delta = nullptr);

// Transfers kappa dt * w_lo from the weaker to the stronger of the pair;
// exact ties transfer nothing.
void non_identity(double& wa, double& wb, double kappa, double dt,
                  double* moved = nullptr);

// For a body member at w, an identity-linked absent-or-present item gains
// min(pool, kappa dt w), funded from the pool.
void identity(Shadow& s, std::uint64_t member, std::uint64_t linked, double kappa,
              double dt, double* abs_delta = nullptr);

}  // namespace da

// All shadows of the current focus, keyed by head. Heads are created by the
// spike activities and destroyed when their head is expelled.
class ShadowField {
public:
    // S+ for an unexpected head: empty body, pool = E0.
    void init_instance_shadow(InstanceId head, double initial_pool);
    void init_vi_shadow(ViId head, double initial_pool);
    // S+ for an expected VI: body seeded from the predicting HLS
    // (sum-normalized positive contributions); empty seeds fall back to S+.
    void init_vi_shadow_from_seeds(ViId head, const std::map<ViId, double>& seeds,
                                   double initial_pool);

    // Head expelled: shadow destroyed; returns the removed body mass.
    double erase_instance_shadow(InstanceId head);
    double erase_vi_shadow(ViId head);

    bool has_instance_shadow(InstanceId head) const { return inst_.count(head) != 0; }
    bool has_vi_shadow(ViId head) const { return vi_.count(head) != 0; }
    const Shadow& instance_shadow(InstanceId head) const { return inst_.at(head); }
    const Shadow& vi_shadow(ViId head) const { return vi_.at(head); }
    Shadow& instance_shadow(InstanceId head) { return inst_.at(head); }
    Shadow& vi_shadow(ViId head) { return vi_.at(head); }
    const std::map<InstanceId, Shadow>& instance_shadows() const { return inst_; }
    const std::map<ViId, Shadow>& vi_shadows() const { return vi_; }
    std::map<InstanceId, Shadow>& instance_shadows() { return inst_; }
    std::map<ViId, Shadow>& vi_shadows() { return vi_; }

    double total_mass_and_pools() const;

    // Runs the DAs in fixed order (decay, match, identity, consistency,
    // sharpening, non-identity) over substeps of at most dt_max.
    TickReport tick(double dt, const World& world, const MemoryStore& memory,
                    const TickParams& tp);

    // Reverse shadowing: participation of a memory instance in the shadow of
    // each focus instance, instance-id order.
    std::vector<std::pair<InstanceId, double>> reverse_instance_lookup(
        InstanceId memory_instance) const;

private:
    std::map<InstanceId, Shadow> inst_;
    std::map<ViId, Shadow> vi_;
};

// Match gains for one instance head against every recorded instance:
// g(m) = coverage_match(head covers m) * salience_norm(m). Only positive
// entries are returned, memory order.
std::vector<std::pair<std::uint64_t, double>> instance_match_gains(
    const Instance& head, const World& world, const MemoryStore& memory);

// Match gains for one VI head: same structural kind, g = verb similarity *
// mean participation of the item's parts in the shadows of the head's parts *
// salience_norm.
std::vector<std::pair<std::uint64_t, double>> vi_match_gains(const VerbInstance& head,
                                                             const World& world,
                                                             const MemoryStore& memory,
                                                             const ShadowField& field);

}  // namespace story
