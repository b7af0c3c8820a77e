#include "relprop/engine.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace relprop {

namespace {

// new - old, per dimension, over the union of the two maps.
DeltaMap diff(const Dimensioned& new_value, const Dimensioned& old_value, double missing) {
    DeltaMap out;
    for (const auto& [dim, v] : new_value) {
        const double o = old_value.count(dim) ? old_value.at(dim).value() : missing;
        out[dim] = v.value() - o;
    }
    for (const auto& [dim, v] : old_value)
        if (!new_value.count(dim)) out[dim] = missing - v.value();
    return out;
}

bool nearly_equal(const Dimensioned& a, const Dimensioned& b) {
    for (const auto& [dim, d] : diff(a, b, 0.0))
        if (std::abs(d) > kTolerance) return false;
    return true;
}

std::vector<std::size_t> forward_hop_indices(const Message& msg) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < msg.hops.size(); ++i)
        if (msg.hops[i].direction == Direction::Forward) out.push_back(i);
    return out;
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", v);
    return buf;
}

std::string format_dimensioned(const Dimensioned& rho) {
    std::string out;
    for (const auto& [dim, v] : rho) {
        if (!out.empty()) out += ",";
        out += dim + ":" + format_real(v.value());
    }
    return out.empty() ? "(clean slate)" : out;
}

}  // namespace

Engine::Engine(RunConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.prop.validate();
}

const Agent& Engine::agent_at(const AgentId& id) const {
    auto it = agents_.find(id);
    if (it == agents_.end()) throw Error(ErrorCode::UnknownEntity, "agent " + id);
    return it->second;
}

const Message& Engine::message_at(const MessageId& id) const {
    auto it = messages_.find(id);
    if (it == messages_.end()) throw Error(ErrorCode::UnknownEntity, "message " + id);
    return it->second;
}

Agent& Engine::mutable_agent(const AgentId& id) {
    return const_cast<Agent&>(agent_at(id));
}

Message& Engine::mutable_message(const MessageId& id) {
    return const_cast<Message&>(message_at(id));
}

ChainId Engine::new_chain(const AgentId& origin) {
    if (!agents_.count(origin)) throw Error(ErrorCode::UnknownAgent, "agent " + origin);
    ChainId id;
    do {
        id = "C" + std::to_string(++chain_counter_);
    } while (chains_.count(id));
    return id;
}

void Engine::record(TraceRecord::Kind kind, const std::string& entity, const std::string& dim,
                    double old_value, double new_value, const ChainId& cause) {
    trace_.push_back({++step_, kind, entity, dim, old_value, new_value, cause});
}

void Engine::record_dimensioned(TraceRecord::Kind kind, const std::string& entity,
                                const Dimensioned& before, const Dimensioned& after,
                                const ChainId& cause) {
    Dimensioned b = before;
    Dimensioned a = after;
    for (const auto& [dim, v] : a) b.emplace(dim, Scalar(0.0));
    for (const auto& [dim, v] : b) a.emplace(dim, Scalar(0.0));
    for (const auto& [dim, v] : a)
        record(kind, entity, dim, b.at(dim).value(), v.value(), cause);
}

void Engine::assert_into_store(const Message& msg) {
    if (std::holds_alternative<ReliabilityJudgement>(msg.content)) return;
    const StatementKey key = statement_key(msg.content);
    const Statement* prior = store_.find(key);
    const Dimensioned before = prior ? prior->reliability : Dimensioned{};
    store_.assert_message(msg);
    record_dimensioned(TraceRecord::Kind::Assert, key.canonical(), before,
                       store_.find(key)->reliability, msg.chain);
}

void Engine::apply_delta_to_message(Message& msg, const DeltaMap& delta, const ChainId& cause) {
    Dimensioned before = msg.reliability;
    for (const auto& [dim, d] : delta)
        before.emplace(dim, cfg_.prop.dimension_default);
    Dimensioned after = before;
    for (const auto& [dim, d] : delta) after[dim] = clamp(after[dim].value() + d);
    msg.reliability = after;
    record_dimensioned(TraceRecord::Kind::Update, msg.id, before, after, cause);
}

void Engine::update_agent(const AgentId& id, const DeltaMap& delta, const std::string& cause_msg,
                          const ChainId& cause_chain) {
    Agent& a = mutable_agent(id);
    Agent updated = apply_agent_delta(a, delta, cause_msg);
    record_dimensioned(TraceRecord::Kind::Update, id, a.reliability, updated.reliability,
                       cause_chain);
    a = std::move(updated);
}

void Engine::propagate_message_change(const MessageId& id, const Dimensioned& old_reliability) {
    Message& msg = mutable_message(id);
    auto chain_it = chains_.find(msg.chain);
    if (chain_it == chains_.end())
        throw Error(ErrorCode::UnknownEntity, "chain " + msg.chain);
    ChainState& chain = chain_it->second;

    const auto fwd = forward_hop_indices(msg);
    if (fwd.empty()) throw Error(ErrorCode::InconsistentChain, "message " + id + " has no hops");

    if (fwd.size() == 1) {
        const Hop origin = msg.hops[fwd[0]];
        msg.hops[fwd[0]].reliability = msg.reliability;
        const DeltaMap delta = diff(msg.reliability, old_reliability, 0.0);

        Message& tip = mutable_message(chain.tip);
        const Hop back{origin.destination, origin.source, Direction::Backward, msg.content,
                       msg.reliability};
        auto extended = extend_chain(tip, back);
        if (!extended) {
            record(TraceRecord::Kind::Suppressed, origin.source, "-", 0.0, 0.0, chain.id);
            return;
        }
        tip = std::move(*extended);
        update_agent(origin.source, delta, msg.id, chain.id);
        return;
    }

    std::vector<Dimensioned> old_parts;
    old_parts.reserve(fwd.size());
    for (const auto i : fwd) old_parts.push_back(msg.hops[i].reliability);

    const Dimensioned new_combined = msg.reliability;
    auto new_parts = chain_decompose(old_parts, old_reliability, new_combined, cfg_.prop);

    for (std::size_t k = 0; k < fwd.size(); ++k) msg.hops[fwd[k]].reliability = new_parts[k];

    // Clamping inside the decomposition can leave alpha*min of the new parts
    // below the requested combined value; re-sync the message to the value
    // its parts actually support.
    const Dimensioned resynced = chain_combine(new_parts, cfg_.prop);
    if (!nearly_equal(resynced, new_combined)) {
        record_dimensioned(TraceRecord::Kind::Update, msg.id, new_combined, resynced, chain.id);
        msg.reliability = resynced;
    }

    for (std::size_t k = new_parts.size(); k-- > 0;) {
        const Hop hop = msg.hops[fwd[k]];
        const DeltaMap delta = diff(new_parts[k], old_parts[k], cfg_.prop.dimension_default.value());

        Message& tip = mutable_message(chain.tip);
        const Hop back{hop.destination, hop.source, Direction::Backward, msg.content,
                       new_parts[k]};
        auto extended = extend_chain(tip, back);
        if (!extended) {
            record(TraceRecord::Kind::Suppressed, hop.source, "-", 0.0, 0.0, chain.id);
            break;
        }
        tip = std::move(*extended);

        if (k + 1 < new_parts.size() && k < chain.sequence.size() &&
            chain.sequence[k] != msg.id) {
            Message& carrier = mutable_message(chain.sequence[k]);
            const Dimensioned before = carrier.reliability;
            const Dimensioned after =
                k == 0 ? new_parts[0]
                       : chain_combine(std::vector<Dimensioned>(new_parts.begin(),
                                                                new_parts.begin() + k + 1),
                                       cfg_.prop);
            const auto carrier_fwd = forward_hop_indices(carrier);
            for (std::size_t j = 0; j < carrier_fwd.size() && j <= k; ++j)
                carrier.hops[carrier_fwd[j]].reliability = new_parts[j];
            carrier.reliability = after;
            record_dimensioned(TraceRecord::Kind::Update, carrier.id, before, after, chain.id);
        }

        update_agent(hop.source, delta, msg.id, chain.id);
    }
}

void Engine::on(const DeclareAgent& ev) {
    if (agents_.count(ev.id)) throw Error(ErrorCode::DuplicateId, "agent " + ev.id);
    if (ev.inertia < 0.0) throw Error(ErrorCode::InvalidParameter, "inertia must be >= 0");
    agents_[ev.id] = Agent{ev.id, ev.reliability, ev.inertia, {}};
}

void Engine::on(const Configure& ev) {
    if (ev.parameter == "alpha") cfg_.prop.alpha = ev.value;
    else if (ev.parameter == "lambda_agree") cfg_.prop.lambda_agree = ev.value;
    else if (ev.parameter == "lambda_disagree") cfg_.prop.lambda_disagree = ev.value;
    else if (ev.parameter == "epsilon") cfg_.prop.epsilon_numeric = ev.value;
    else if (ev.parameter == "dim_default") cfg_.prop.dimension_default = Scalar(ev.value);
    else if (ev.parameter == "tau") cfg_.tau = ev.value;
    else throw Error(ErrorCode::InvalidParameter, "unknown config parameter " + ev.parameter);
    cfg_.prop.validate();
}

void Engine::on(const SendEvent& ev) {
    if (messages_.count(ev.id)) throw Error(ErrorCode::DuplicateId, "message " + ev.id);
    if (ev.from == ev.to)
        throw Error(ErrorCode::InvalidParameter, "self-send by agent " + ev.from);
    const Agent& from = agent_at(ev.from);
    agent_at(ev.to);

    ChainId cid;
    if (ev.chain) {
        if (chains_.count(*ev.chain))
            throw Error(ErrorCode::DuplicateId, "chain " + *ev.chain);
        cid = *ev.chain;
    } else {
        cid = new_chain(ev.from);
    }

    const Dimensioned rel = message_initial_reliability(from, ev.declared, cfg_.prop);
    Message msg{ev.id, cid, ev.content, rel, {}};
    msg.hops.push_back(Hop{ev.from, ev.to, Direction::Forward, ev.content, rel});
    messages_[ev.id] = msg;
    chains_[cid] = ChainState{cid, {ev.id}, ev.id};
    live_[ev.id] = true;
    assert_into_store(messages_[ev.id]);
}

void Engine::on(const ForwardEvent& ev) {
    if (messages_.count(ev.id)) throw Error(ErrorCode::DuplicateId, "message " + ev.id);
    if (ev.from == ev.to)
        throw Error(ErrorCode::InvalidParameter, "self-forward by agent " + ev.from);
    const Message& prior = message_at(ev.prior);
    const Agent& from = agent_at(ev.from);
    agent_at(ev.to);
    ChainState& chain = chains_.at(prior.chain);

    MessageContent content = prior.content;
    if (ev.value) {
        auto* numeric = std::get_if<NumericClaim>(&content);
        if (!numeric)
            throw Error(ErrorCode::NotComparable,
                        "value modification on non-numeric message " + ev.prior);
        numeric->value = *ev.value;
        numeric->value_token = *ev.value_token;
    }

    Message& tip = mutable_message(chain.tip);
    const Hop hop{ev.from, ev.to, Direction::Forward, content, from.reliability};
    auto extended = extend_chain(tip, hop);
    if (!extended) {
        record(TraceRecord::Kind::Suppressed, ev.id, "-", 0.0, 0.0, chain.id);
        return;
    }
    if (chain.tip != ev.prior)
        throw Error(ErrorCode::InconsistentChain,
                    "cannot forward " + ev.prior + ": chain " + chain.id + " already extended");

    std::vector<Dimensioned> parts;
    for (const auto& h : extended->hops)
        if (h.direction == Direction::Forward) parts.push_back(h.reliability);

    Message msg{ev.id, chain.id, content, chain_combine(parts, cfg_.prop), extended->hops};
    messages_[ev.id] = std::move(msg);
    chain.sequence.push_back(ev.id);
    chain.tip = ev.id;
    live_.erase(ev.prior);
    live_[ev.id] = true;
    assert_into_store(messages_[ev.id]);
}

void Engine::on(const ReconcileEvent& ev) {
    std::vector<Message> candidates;
    for (const auto& [id, live] : live_) {
        if (!live) continue;
        const Message& m = message_at(id);
        if (content_topic(m.content) == ev.topic) candidates.push_back(m);
    }
    if (candidates.size() < 2)
        throw Error(ErrorCode::NotEnoughMessages,
                    "fewer than two live messages on topic " + ev.topic);

    const auto deltas = reconcile_set(candidates, cfg_.prop);
    for (const auto& delta : deltas) {
        Message& m = mutable_message(delta.target);
        const Dimensioned before = m.reliability;
        apply_delta_to_message(m, delta.change, delta.cause);
        propagate_message_change(delta.target, before);
    }
}

void Engine::on(const JudgeEvent& ev) {
    if (messages_.count(ev.id)) throw Error(ErrorCode::DuplicateId, "message " + ev.id);
    if (ev.from == ev.to)
        throw Error(ErrorCode::InvalidParameter, "self-judge by agent " + ev.from);
    const Agent& from = agent_at(ev.from);
    agent_at(ev.to);
    if (ev.target_is_agent) agent_at(ev.target);
    else message_at(ev.target);

    const ChainId cid = new_chain(ev.from);
    const Dimensioned rel = message_initial_reliability(from, ev.declared, cfg_.prop);
    const MessageContent content = ReliabilityJudgement{ev.target_is_agent, ev.target, ev.judged};
    Message msg{ev.id, cid, content, rel, {}};
    msg.hops.push_back(Hop{ev.from, ev.to, Direction::Forward, content, rel});
    messages_[ev.id] = std::move(msg);
    chains_[cid] = ChainState{cid, {ev.id}, ev.id};

    const JudgementInput input{ev.judged, rel};
    if (ev.target_is_agent) {
        Agent& target = mutable_agent(ev.target);
        auto [merged, inertia] =
            merge_reliability_judgements(target.reliability, target.inertia, {input}, cfg_.prop);
        const Dimensioned before = target.reliability;
        target.history.push_back({before, ev.id});
        target.reliability = merged;
        target.inertia = inertia;
        record_dimensioned(TraceRecord::Kind::Update, ev.target, before, merged, cid);
    } else {
        // Messages carry no inertia of their own; a fixed unit inertia keeps
        // a single judgement from overwriting the stored value outright.
        Message& target = mutable_message(ev.target);
        auto [merged, inertia] =
            merge_reliability_judgements(target.reliability, 1.0, {input}, cfg_.prop);
        (void)inertia;
        const Dimensioned before = target.reliability;
        target.reliability = merged;
        record_dimensioned(TraceRecord::Kind::Update, ev.target, before, merged, cid);
        propagate_message_change(ev.target, before);
    }
}

void Engine::on(const ObserveEvent& ev) {
    {
        const Message& observed = message_at(ev.id);
        const Message& reference = message_at(ev.against);
        auto [d_obs, d_ref] = reconcile_pair(observed, reference, cfg_.prop);

        Message& m = mutable_message(ev.id);
        const Dimensioned before = m.reliability;
        apply_delta_to_message(m, d_obs.change, d_obs.cause);
        propagate_message_change(ev.id, before);

        Message& r = mutable_message(ev.against);
        apply_delta_to_message(r, d_ref.change, d_ref.cause);
        // The reference side is not a chain we follow; no back-propagation.
    }
}

void Engine::on(const ExpectEvent& ev) {
    const Dimensioned& rel =
        ev.entity_is_agent ? agent_at(ev.entity).reliability : message_at(ev.entity).reliability;
    const std::string label = (ev.entity_is_agent ? "agent:" : "msg:") + ev.entity;

    double actual;
    if (ev.dimension) {
        auto it = rel.find(*ev.dimension);
        if (it == rel.end())
            throw ExpectFailed(step_, label, "dimension " + *ev.dimension + " absent");
        actual = it->second.value();
    } else {
        actual = av_or(rel);
    }

    bool ok = false;
    const char* name = "eq";
    switch (ev.cmp) {
        case Comparator::Lt: ok = actual < ev.value; name = "lt"; break;
        case Comparator::Le: ok = actual <= ev.value + kTolerance; name = "le"; break;
        case Comparator::Eq: ok = std::abs(actual - ev.value) <= kTolerance; name = "eq"; break;
        case Comparator::Ge: ok = actual >= ev.value - kTolerance; name = "ge"; break;
        case Comparator::Gt: ok = actual > ev.value; name = "gt"; break;
    }
    if (!ok)
        throw ExpectFailed(step_, label,
                           "expected " + std::string(name) + " " + format_real(ev.value) +
                               ", actual " + format_real(actual));
}

void Engine::apply(const ScenarioEvent& event) {
    std::visit([this](const auto& ev) { on(ev); }, event);
}

void Engine::apply(const std::vector<ParsedEvent>& events) {
    for (const auto& ev : events) apply(ev.event);
}

Engine run_scenario(const std::vector<ParsedEvent>& events, RunConfig base) {
    Engine engine(std::move(base));
    engine.apply(events);
    return engine;
}

const char* trace_kind_name(TraceRecord::Kind kind) {
    switch (kind) {
        case TraceRecord::Kind::Update: return "update";
        case TraceRecord::Kind::Suppressed: return "suppressed";
        case TraceRecord::Kind::Assert: return "assert";
    }
    return "?";
}

std::string format_trace(const std::vector<TraceRecord>& trace) {
    std::string out = "step\tkind\tentity\tdimension\told\tnew\tcause\n";
    for (const auto& r : trace) {
        out += std::to_string(r.step);
        out += "\t";
        out += trace_kind_name(r.kind);
        out += "\t" + r.entity + "\t" + r.dimension + "\t" + format_real(r.old_value) + "\t" +
               format_real(r.new_value) + "\t" + r.cause + "\n";
    }
    return out;
}

std::string format_query(const Engine& engine, double tau) {
    std::string out;
    for (const auto& stmt : engine.store().accepted_at(Scalar(tau)))
        out += stmt.key.canonical() + "\t" + format_real(av_or(stmt.reliability)) + "\n";
    return out;
}

std::string format_explain(const Engine& engine, const std::string& entity) {
    std::ostringstream out;
    const auto describe_hops = [&out](const Message& m) {
        for (const auto& hop : m.hops) {
            out << "  hop " << hop.source << " -> " << hop.destination << " "
                << (hop.direction == Direction::Forward ? "forward" : "backward")
                << " rel=" << format_dimensioned(hop.reliability) << "\n";
        }
    };

    if (engine.agents().count(entity)) {
        const Agent& a = engine.agents().at(entity);
        out << "agent " << a.id << " rel=" << format_dimensioned(a.reliability)
            << " inertia=" << format_real(a.inertia) << "\n";
        out << "history (" << a.history.size() << " updates):\n";
        for (const auto& entry : a.history)
            out << "  prior=" << format_dimensioned(entry.prior) << " cause=" << entry.cause
                << "\n";
        out << "chains touching " << entity << ":\n";
        for (const auto& [cid, chain] : engine.chains()) {
            const Message& tip = engine.messages().at(chain.tip);
            const bool touches =
                std::any_of(tip.hops.begin(), tip.hops.end(), [&](const Hop& h) {
                    return h.source == entity || h.destination == entity;
                });
            if (!touches) continue;
            out << " chain " << cid << " (tip " << chain.tip << "):\n";
            describe_hops(tip);
        }
        return out.str();
    }

    if (engine.messages().count(entity)) {
        const Message& m = engine.messages().at(entity);
        out << "message " << m.id << " chain=" << m.chain
            << " rel=" << format_dimensioned(m.reliability) << "\n";
        describe_hops(m);
        return out.str();
    }

    throw Error(ErrorCode::UnknownEntity, entity);
}

}  // namespace relprop
