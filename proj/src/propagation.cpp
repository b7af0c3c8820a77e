#include "relprop/propagation.hpp"

#include <algorithm>
#include <cmath>

namespace relprop {

void PropagationConfig::validate() const {
    if (!std::isfinite(alpha) || alpha < 0.0 || alpha > 1.0)
        throw Error(ErrorCode::InvalidParameter, "alpha must lie in [0,1]");
    if (!std::isfinite(lambda_agree) || lambda_agree < 0.0)
        throw Error(ErrorCode::InvalidParameter, "lambda_agree must be >= 0");
    if (!std::isfinite(lambda_disagree) || lambda_disagree < 0.0)
        throw Error(ErrorCode::InvalidParameter, "lambda_disagree must be >= 0");
    if (!std::isfinite(epsilon_numeric) || epsilon_numeric < 0.0)
        throw Error(ErrorCode::InvalidParameter, "epsilon must be >= 0");
}

Dimensioned message_initial_reliability(const Agent& agent,
                                        const std::optional<Dimensioned>& declared,
                                        const PropagationConfig& cfg) {
    if (!declared) return agent.reliability;
    return lift_elementwise(
        [&cfg](Scalar a, Scalar b) { return and_combine(a, b, cfg.alpha); },
        agent.reliability, *declared, cfg.dimension_default);
}

Agent apply_agent_delta(const Agent& agent, const DeltaMap& delta, const std::string& cause) {
    Agent out = agent;
    out.history.push_back({agent.reliability, cause});
    for (const auto& [dim, d] : delta) {
        if (!std::isfinite(d))
            throw Error(ErrorCode::InvalidNumeric, "non-finite delta for " + agent.id);
        const double old = out.reliability.count(dim) ? out.reliability[dim].value() : 0.0;
        out.reliability[dim] = clamp(old + d / (agent.inertia + 1.0));
    }
    out.inertia = agent.inertia + 1.0;
    return out;
}

namespace {

// Union of all dimension names, every part extended with the default.
std::vector<Dimensioned> align_all(const std::vector<Dimensioned>& parts, Scalar def) {
    Dimensioned shape;
    for (const auto& p : parts)
        for (const auto& [dim, v] : p) shape.emplace(dim, def);
    std::vector<Dimensioned> out;
    out.reserve(parts.size());
    for (const auto& p : parts) {
        Dimensioned q = shape;
        for (const auto& [dim, v] : p) q[dim] = v;
        out.push_back(std::move(q));
    }
    return out;
}

}  // namespace

Dimensioned chain_combine(const std::vector<Dimensioned>& parts, const PropagationConfig& cfg) {
    if (parts.empty())
        throw Error(ErrorCode::EmptyInput, "chain_combine of an empty chain");
    cfg.validate();
    auto aligned = align_all(parts, cfg.dimension_default);
    Dimensioned out = aligned.front();
    for (std::size_t i = 1; i < aligned.size(); ++i)
        for (const auto& [dim, v] : aligned[i])
            out[dim] = std::min(out[dim], v);
    for (auto& [dim, v] : out) v = clamp(cfg.alpha * v.value());
    return out;
}

std::vector<Dimensioned> chain_decompose(const std::vector<Dimensioned>& old_parts,
                                         const Dimensioned& old_combined,
                                         const Dimensioned& new_combined,
                                         const PropagationConfig& cfg) {
    const Dimensioned recombined = chain_combine(old_parts, cfg);
    auto [oc, rc] = align_dimensions(old_combined, recombined, cfg.dimension_default);
    for (const auto& [dim, v] : oc)
        if (std::abs(v.value() - rc.at(dim).value()) > kTolerance)
            throw Error(ErrorCode::InconsistentChain,
                        "old_combined does not match chain_combine(old_parts) in dimension " + dim);

    auto aligned = align_all(old_parts, cfg.dimension_default);
    std::vector<Dimensioned> out;
    out.reserve(aligned.size());
    for (const auto& part : aligned) {
        Dimensioned q;
        for (const auto& [dim, v] : part) {
            const double ocv = oc.count(dim) ? oc.at(dim).value() : cfg.dimension_default.value();
            const double ncv =
                new_combined.count(dim) ? new_combined.at(dim).value() : cfg.dimension_default.value();
            if (std::abs(ocv) > kTolerance && ocv * ncv >= 0.0) {
                q[dim] = clamp(v.value() * (ncv / ocv));
            } else {
                if (cfg.alpha <= kTolerance)
                    throw Error(ErrorCode::InvalidParameter,
                                "cannot decompose across zero with alpha = 0");
                q[dim] = clamp(v.value() + (ncv - ocv) / cfg.alpha);
            }
        }
        out.push_back(std::move(q));
    }
    return out;
}

namespace {

bool contents_agree(const MessageContent& c1, const MessageContent& c2,
                    const PropagationConfig& cfg) {
    if (const auto* n1 = std::get_if<NumericClaim>(&c1)) {
        const auto& n2 = std::get<NumericClaim>(c2);
        return std::abs(n1->value - n2.value) <= cfg.epsilon_numeric;
    }
    const auto& p1 = std::get<PropositionClaim>(c1);
    const auto& p2 = std::get<PropositionClaim>(c2);
    return p1.claim == p2.claim && p1.affirmed == p2.affirmed;
}

}  // namespace

std::pair<ReliabilityDelta, ReliabilityDelta> reconcile_pair(const Message& m1,
                                                             const Message& m2,
                                                             const PropagationConfig& cfg) {
    cfg.validate();
    const std::string& t1 = content_topic(m1.content);
    const std::string& t2 = content_topic(m2.content);
    if (t1.empty() || t2.empty())
        throw Error(ErrorCode::NotComparable, "reliability judgements cannot be reconciled");
    if (t1 != t2)
        throw Error(ErrorCode::NotComparable, "topic mismatch: " + t1 + " vs " + t2);
    if (m1.content.index() != m2.content.index())
        throw Error(ErrorCode::NotComparable, "numeric vs propositional content");
    if (m1.chain == m2.chain)
        throw Error(ErrorCode::NotComparable, "messages share chain " + m1.chain);

    const bool agree = contents_agree(m1.content, m2.content, cfg);
    const double lambda = agree ? cfg.lambda_agree : -cfg.lambda_disagree;

    auto [r1, r2] = align_dimensions(m1.reliability, m2.reliability, cfg.dimension_default);
    ReliabilityDelta d1{m1.id, {}, m2.chain};
    ReliabilityDelta d2{m2.id, {}, m1.chain};
    for (const auto& [dim, v1] : r1) {
        const double v2 = r2.at(dim).value();
        d1.change[dim] = lambda * confidence(v2) * spread(v1.value());
        d2.change[dim] = lambda * confidence(v1.value()) * spread(v2);
    }
    return {std::move(d1), std::move(d2)};
}

std::vector<ReliabilityDelta> reconcile_set(const std::vector<Message>& msgs,
                                            const PropagationConfig& cfg) {
    if (msgs.size() < 2)
        throw Error(ErrorCode::NotEnoughMessages, "reconcile needs at least two messages");
    std::vector<Message> sorted = msgs;
    std::sort(sorted.begin(), sorted.end(),
              [](const Message& a, const Message& b) { return a.id < b.id; });

    std::map<MessageId, ReliabilityDelta> net;
    for (const auto& m : sorted) net[m.id] = ReliabilityDelta{m.id, {}, m.chain};

    for (std::size_t i = 0; i < sorted.size(); ++i) {
        for (std::size_t j = i + 1; j < sorted.size(); ++j) {
            auto [d1, d2] = reconcile_pair(sorted[i], sorted[j], cfg);
            for (const auto& [dim, d] : d1.change) net[d1.target].change[dim] += d;
            for (const auto& [dim, d] : d2.change) net[d2.target].change[dim] += d;
        }
    }

    std::vector<ReliabilityDelta> out;
    out.reserve(net.size());
    for (auto& [id, delta] : net) out.push_back(std::move(delta));
    return out;
}

std::pair<Dimensioned, double> merge_reliability_judgements(
    const Dimensioned& nu, double iota, const std::vector<JudgementInput>& judgements,
    const PropagationConfig& cfg) {
    if (judgements.empty())
        throw Error(ErrorCode::EmptyInput, "no judgements to merge");
    if (!std::isfinite(iota) || iota < 0.0)
        throw Error(ErrorCode::InvalidParameter, "inertia must be >= 0");

    std::vector<Dimensioned> values{nu};
    std::vector<double> weights{iota};
    double weight_sum = iota;
    for (const auto& j : judgements) {
        const double w = confidence(average(j.judge_reliability).value());
        values.push_back(j.judged);
        weights.push_back(w);
        weight_sum += w;
    }

    const double new_inertia = iota + static_cast<double>(judgements.size());
    if (weight_sum <= kTolerance) return {nu, new_inertia};

    auto aligned = align_all(values, cfg.dimension_default);
    Dimensioned out;
    for (const auto& [dim, v] : aligned.front()) {
        std::vector<std::pair<double, Scalar>> pairs;
        pairs.reserve(aligned.size());
        for (std::size_t i = 0; i < aligned.size(); ++i)
            pairs.emplace_back(weights[i] / weight_sum, aligned[i].at(dim));
        out[dim] = weighted_mean(pairs);
    }
    return {std::move(out), new_inertia};
}

}  // namespace relprop
