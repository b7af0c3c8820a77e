#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relprop/network.hpp"

namespace relprop {

struct PropagationConfig {
    double alpha = 1.0;            // chain / AND attenuation
    double lambda_agree = 0.2;     // reconciliation gain on agreement
    double lambda_disagree = 0.2;  // reconciliation loss on disagreement
    double epsilon_numeric = 0.0;  // numeric agreement tolerance (boundary inclusive)
    Scalar dimension_default = Scalar(0.0);

    void validate() const;
};

// Signed per-dimension change, not yet clamped; application is the
// engine's job.
using DeltaMap = std::map<std::string, double>;

struct ReliabilityDelta {
    std::string target;  // AgentId or MessageId
    DeltaMap change;
    ChainId cause;
};

// Confidence and headroom of a reliability value. conf(1) = 1, conf(-1) = 0;
// spread is the distance left to maximal reliability, so the less reliable
// side of a pair always moves more.
inline double confidence(double r) { return (1.0 + r) / 2.0; }
inline double spread(double r) { return (1.0 - r) / 2.0; }

Dimensioned message_initial_reliability(const Agent& agent,
                                        const std::optional<Dimensioned>& declared,
                                        const PropagationConfig& cfg);

// Pure part of back-propagation: the cycle check against the chain history
// is done by the caller via extend_chain before invoking this.
Agent apply_agent_delta(const Agent& agent, const DeltaMap& delta, const std::string& cause);

Dimensioned chain_combine(const std::vector<Dimensioned>& parts, const PropagationConfig& cfg);

std::vector<Dimensioned> chain_decompose(const std::vector<Dimensioned>& old_parts,
                                         const Dimensioned& old_combined,
                                         const Dimensioned& new_combined,
                                         const PropagationConfig& cfg);

// Agreement test plus the lambda * conf * spread update, per dimension.
// Returns the deltas for (m1, m2) in that order.
std::pair<ReliabilityDelta, ReliabilityDelta> reconcile_pair(const Message& m1,
                                                             const Message& m2,
                                                             const PropagationConfig& cfg);

// Every unordered pair in lexicographic MessageId order; per-message
// deltas are summed so the net effect is order-independent.
std::vector<ReliabilityDelta> reconcile_set(const std::vector<Message>& msgs,
                                            const PropagationConfig& cfg);

struct JudgementInput {
    Dimensioned judged;           // mu: the claimed reliability of the target
    Dimensioned judge_reliability;  // rho: reliability of the judging message
};

// Inertia-weighted mean of the old value with the judged values; judges
// with av(rho) = -1 carry zero weight. Returns (new value, new inertia).
std::pair<Dimensioned, double> merge_reliability_judgements(
    const Dimensioned& nu, double iota, const std::vector<JudgementInput>& judgements,
    const PropagationConfig& cfg);

}  // namespace relprop
