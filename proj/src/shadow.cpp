#include "story/shadow.hpp"

#include <algorithm>
#include <cmath>

namespace story {

namespace da {

void decay(Shadow& s, double lambda, double dt, double* abs_delta) {
    if (lambda <= 0.0 || dt <= 0.0) return;
    double shrink = std::exp(-lambda * dt);
    double released = 0.0;
    for (auto& [id, w] : s.body) {
        double next = w * shrink;
        released += w - next;
        if (abs_delta) *abs_delta += w - next;
        w = next;
    }
    s.pool += released;
}

void match(Shadow& s, const std::vector<std::pair<std::uint64_t, double>>& gains,
           double kappa, double dt, double* abs_delta) {
    if (s.pool <= 0.0 || gains.empty()) return;
    double total_gain = 0.0;
    for (const auto& [id, g] : gains) total_gain += g;
    if (total_gain <= 0.0) return;
    double transfer = std::min(s.pool, kappa * dt * total_gain);
    if (transfer <= 0.0) return;
    double returned = 0.0;
    for (const auto& [id, g] : gains) {
        if (g <= 0.0) continue;
        double share = transfer * g / total_gain;
        double& w = s.body[id];  // seeds absent items at zero
        double next = std::min(1.0, w + share);
        returned += (w + share) - next;
        if (abs_delta) *abs_delta += next - w;
        w = next;
    }
    s.pool -= transfer;
    s.pool += returned;
}

void consistency(double& p, std::vector<double*>& q, double kappa, double dt,
                 double* moved) {
    if (q.empty()) return;
    double n = static_cast<double>(q.size());
    double sum = p;
    for (double* qi : q) sum += *qi;
    double mean = sum / (n + 1.0);
    double delta = kappa * dt * (mean - p) / 2.0;
    if (delta > 0.0) {
        double room = 1.0 - p;
        double avail = 1.0;
        for (double* qi : q) avail = std::min(avail, *qi);
        delta = std::min({delta, room, n * avail});
    } else if (delta < 0.0) {
        double room = 1.0;
        for (double* qi : q) room = std::min(room, 1.0 - *qi);
        delta = -std::min({-delta, p, n * room});
    }
    if (delta == 0.0) return;
    p += delta;
    double each = delta / n;
    for (double* qi : q) *qi -= each;
    if (moved) *moved += std::abs(delta) + std::abs(each) * n;
}

void sharpening(std::vector<double*>& ws, double kappa, double dt, double* abs_delta) {
    std::size_t n = ws.size();
    if (n < 2) return;
    double sum0 = 0.0;
    for (double* w : ws) sum0 += *w;
    double mean = sum0 / static_cast<double>(n);
    std::vector<double> next(n);
    double sum1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double w = *ws[i];
        next[i] = std::max(0.0, w + kappa * dt * w * (w - mean));
        sum1 += next[i];
    }
    if (sum1 <= 0.0) return;
    double scale = sum0 / sum1;
    for (double& w : next) w *= scale;
    // redistribute clamp overflow among uncapped entries, proportional to weight
    for (int guard = 0; guard < 64; ++guard) {
        double excess = 0.0;
        double open = 0.0;
        for (double w : next) {
            if (w > 1.0)
                excess += w - 1.0;
            else
                open += w;
        }
        if (excess <= 0.0) break;
        for (double& w : next) {
            if (w > 1.0)
                w = 1.0;
            else if (open > 0.0)
                w += excess * w / open;
        }
        if (open <= 0.0) break;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (abs_delta) *abs_delta += std::abs(next[i] - *ws[i]);
        *ws[i] = next[i];
    }
}

void non_identity(double& wa, double& wb, double kappa, double dt, double* moved) {
    if (wa == wb) return;
    double& hi = wa > wb ? wa : wb;
    double& lo = wa > wb ? wb : wa;
    double t = std::min({kappa * dt * lo, 1.0 - hi, lo});
    if (t <= 0.0) return;
    hi += t;
    lo -= t;
    if (moved) *moved += 2.0 * t;
}

void identity(Shadow& s, std::uint64_t member, std::uint64_t linked, double kappa,
              double dt, double* abs_delta) {
    if (s.pool <= 0.0) return;
    auto it = s.body.find(member);
    if (it == s.body.end() || it->second <= 0.0) return;
    double& target = s.body[linked];  // seeds at zero if absent
    double gain = std::min({s.pool, kappa * dt * s.body[member], 1.0 - target});
    if (gain <= 0.0) return;
    target += gain;
    s.pool -= gain;
    if (abs_delta) *abs_delta += gain;
}

}  // namespace da

void ShadowField::init_instance_shadow(InstanceId head, double initial_pool) {
    if (inst_.count(head)) throw EngineError("shadow already exists for instance head");
    inst_.emplace(head, Shadow{{}, initial_pool});
}

void ShadowField::init_vi_shadow(ViId head, double initial_pool) {
    if (vi_.count(head)) throw EngineError("shadow already exists for VI head");
    vi_.emplace(head, Shadow{{}, initial_pool});
}

void ShadowField::init_vi_shadow_from_seeds(ViId head, const std::map<ViId, double>& seeds,
                                            double initial_pool) {
    if (vi_.count(head)) throw EngineError("shadow already exists for VI head");
    double total = 0.0;
    for (const auto& [id, w] : seeds)
        if (w > 0.0) total += w;
    Shadow s;
    s.pool = initial_pool;
    if (total > 0.0)
        for (const auto& [id, w] : seeds)
            if (w > 0.0) s.body[id.v] = std::min(1.0, w / total);
    vi_.emplace(head, std::move(s));
}

double ShadowField::erase_instance_shadow(InstanceId head) {
    auto it = inst_.find(head);
    if (it == inst_.end()) return 0.0;
    double mass = it->second.mass();
    inst_.erase(it);
    return mass;
}

double ShadowField::erase_vi_shadow(ViId head) {
    auto it = vi_.find(head);
    if (it == vi_.end()) return 0.0;
    double mass = it->second.mass();
    vi_.erase(it);
    return mass;
}

double ShadowField::total_mass_and_pools() const {
    double s = 0.0;
    for (const auto& [h, sh] : inst_) s += sh.mass() + sh.pool;
    for (const auto& [h, sh] : vi_) s += sh.mass() + sh.pool;
    return s;
}

std::vector<std::pair<InstanceId, double>> ShadowField::reverse_instance_lookup(
    InstanceId memory_instance) const {
    std::vector<std::pair<InstanceId, double>> out;
    for (const auto& [head, shadow] : inst_) {
        double w = shadow.weight(memory_instance.v);
        if (w > 0.0) out.push_back({head, w});
    }
    return out;
}

std::vector<std::pair<std::uint64_t, double>> instance_match_gains(
    const Instance& head, const World& world, const MemoryStore& memory) {
    std::vector<std::pair<std::uint64_t, double>> gains;
    double max_sal = memory.max_instance_salience();
    if (max_sal <= 0.0) return gains;
    for (const MemInstance& m : memory.instances()) {
        if (m.id == head.id) continue;
        double match = coverage_match(world.vocab(), head.attributes, m.attributes);
        if (match <= 0.0) continue;
        double g = match * (m.salience / max_sal);
        if (g > 0.0) gains.push_back({m.id.v, g});
    }
    return gains;
}

namespace {

// instance part positions that align between two same-kind VIs
std::vector<std::pair<InstanceId, InstanceId>> aligned_parts(const MemVi& m,
                                                             const VerbInstance& head) {
    std::vector<std::pair<InstanceId, InstanceId>> out;
    out.push_back({m.subject, head.subject});
    if (head.kind == ViKind::Svo) out.push_back({m.object, head.object});
    return out;
}

}  // namespace

std::vector<std::pair<std::uint64_t, double>> vi_match_gains(const VerbInstance& head,
                                                             const World& world,
                                                             const MemoryStore& memory,
                                                             const ShadowField& field) {
    std::vector<std::pair<std::uint64_t, double>> gains;
    double max_sal = memory.max_vi_salience();
    if (max_sal <= 0.0) return gains;
    for (const MemVi& m : memory.vis()) {
        if (m.id == head.id || m.kind != head.kind) continue;
        double verb_sim = overlay_similarity(world.vocab(), m.verb, head.verb);
        if (verb_sim <= 0.0) continue;
        double co = 0.0;
        int positions = 0;
        for (const auto& [mem_part, head_part] : aligned_parts(m, head)) {
            ++positions;
            if (field.has_instance_shadow(head_part))
                co += field.instance_shadow(head_part).weight(mem_part.v);
        }
        if (positions > 0) co /= positions;
        double g = verb_sim * co * (m.salience / max_sal);
        if (g > 0.0) gains.push_back({m.id.v, g});
    }
    return gains;
}

TickReport ShadowField::tick(double dt, const World& world, const MemoryStore& memory,
                             const TickParams& tp) {
    TickReport report;
    if (dt <= 0.0) return report;
    int substeps = std::max(1, static_cast<int>(std::ceil(dt / tp.dt_max - 1e-9)));
    double h = dt / substeps;
    report.substeps = substeps;

    auto bump_inst = [&](InstanceId head, double d) {
        report.instance_abs_delta[head] += d;
        report.total_abs_delta += d;
    };
    auto bump_vi = [&](ViId head, double d) {
        report.vi_abs_delta[head] += d;
        report.total_abs_delta += d;
    };

    // instance-head gains are invariant over the tick (attributes and
    // salience do not change while shadows flow)
    std::map<InstanceId, std::vector<std::pair<std::uint64_t, double>>> inst_gains;
    for (const auto& [head, shadow] : inst_) {
        (void)shadow;
        inst_gains[head] = instance_match_gains(world.instance(head), world, memory);
    }

    for (int step = 0; step < substeps; ++step) {
        // decay
        for (auto& [head, shadow] : inst_) {
            double d = 0.0;
            da::decay(shadow, tp.shadow_decay, h, &d);
            bump_inst(head, d);
        }
        for (auto& [head, shadow] : vi_) {
            double d = 0.0;
            da::decay(shadow, tp.shadow_decay, h, &d);
            bump_vi(head, d);
        }

        // match the head
        for (auto& [head, shadow] : inst_) {
            double d = 0.0;
            da::match(shadow, inst_gains[head], tp.match_rate, h, &d);
            bump_inst(head, d);
        }
        // VI gains read the instance shadows, so they are substep-fresh
        for (auto& [head, shadow] : vi_) {
            double d = 0.0;
            auto gains = vi_match_gains(world.vi(head), world, memory, *this);
            da::match(shadow, gains, tp.match_rate, h, &d);
            bump_vi(head, d);
        }

        // identity
        if (tp.identity_rate > 0.0) {
            for (auto& [head, shadow] : inst_) {
                std::vector<std::uint64_t> members;
                members.reserve(shadow.body.size());
                for (const auto& [id, w] : shadow.body)
                    if (w > 0.0) members.push_back(id);
                for (std::uint64_t member : members) {
                    for (InstanceId linked :
                         world.relations().identity_neighbors(InstanceId{member})) {
                        if (!memory.has_instance(linked)) continue;
                        double d = 0.0;
                        da::identity(shadow, member, linked.v, tp.identity_rate, h, &d);
                        bump_inst(head, d);
                    }
                }
            }
        }

        // consistency between VI shadows and their part shadows
        if (tp.consistency_rate > 0.0) {
            for (auto& [head, shadow] : vi_) {
                const VerbInstance& head_vi = world.vi(head);
                std::vector<std::uint64_t> members;
                members.reserve(shadow.body.size());
                for (const auto& [id, w] : shadow.body) {
                    (void)w;
                    members.push_back(id);
                }
                for (std::uint64_t rid : members) {
                    const MemVi& root = memory.vi(ViId{rid});
                    if (root.kind != head_vi.kind) continue;  // arity mismatch: skip
                    std::vector<double*> q;
                    std::vector<InstanceId> q_heads;
                    for (const auto& [mem_part, head_part] : aligned_parts(root, head_vi)) {
                        auto it = inst_.find(head_part);
                        if (it == inst_.end()) continue;
                        q.push_back(&it->second.body[mem_part.v]);  // seed at zero
                        q_heads.push_back(head_part);
                    }
                    if (q.empty()) continue;
                    double& p = shadow.body[rid];
                    double p_before = p;
                    std::vector<double> q_before;
                    for (double* qi : q) q_before.push_back(*qi);
                    da::consistency(p, q, tp.consistency_rate, h, nullptr);
                    bump_vi(head, std::abs(p - p_before));
                    for (std::size_t i = 0; i < q.size(); ++i)
                        bump_inst(q_heads[i], std::abs(*q[i] - q_before[i]));
                }
            }
        }

        // sharpening across instance shadows
        if (tp.sharpen_rate > 0.0) {
            std::map<std::uint64_t, std::vector<std::pair<InstanceId, double*>>> by_item;
            for (auto& [head, shadow] : inst_)
                for (auto& [id, w] : shadow.body) by_item[id].push_back({head, &w});
            for (auto& [id, entries] : by_item) {
                if (entries.size() < 2) continue;
                std::vector<double*> ws;
                std::vector<double> before;
                for (auto& [head, wp] : entries) {
                    ws.push_back(wp);
                    before.push_back(*wp);
                }
                da::sharpening(ws, tp.sharpen_rate, h, nullptr);
                for (std::size_t i = 0; i < entries.size(); ++i)
                    bump_inst(entries[i].first, std::abs(*ws[i] - before[i]));
            }
        }

        // non-identity within each instance shadow
        if (tp.non_identity_rate > 0.0) {
            const auto& pairs = world.relations().non_identity_pairs();
            for (auto& [head, shadow] : inst_) {
                for (const auto& [a, b] : pairs) {
                    auto ia = shadow.body.find(a.v);
                    auto ib = shadow.body.find(b.v);
                    if (ia == shadow.body.end() || ib == shadow.body.end()) continue;
                    double moved = 0.0;
                    da::non_identity(ia->second, ib->second, tp.non_identity_rate, h,
                                     &moved);
                    bump_inst(head, moved);
                }
            }
        }
    }
    return report;
}

}  // namespace story
