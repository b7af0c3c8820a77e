#pragma once

#include <map>
#include <string>
#include <vector>

#include "relprop/propagation.hpp"
#include "relprop/scenario.hpp"
#include "relprop/threshold.hpp"

namespace relprop {

struct TraceRecord {
    enum class Kind { Update, Suppressed, Assert };

    std::size_t step = 0;
    Kind kind = Kind::Update;
    std::string entity;
    std::string dimension;
    double old_value = 0.0;
    double new_value = 0.0;
    ChainId cause;
};

struct RunConfig {
    PropagationConfig prop;
    double tau = 0.5;
};

struct ChainState {
    ChainId id;
    std::vector<MessageId> sequence;  // forward carriers, in hop order
    MessageId tip;                    // holds the full chain history
};

// Deterministic single-threaded event engine. Entities are looked up by
// id; every reliability change is emitted as a trace record, suppressed
// back-propagation hops as "suppressed" records.
class Engine {
public:
    explicit Engine(RunConfig cfg = {});

    void apply(const ScenarioEvent& event);
    void apply(const std::vector<ParsedEvent>& events);

    ChainId new_chain(const AgentId& origin);

    const std::map<AgentId, Agent>& agents() const { return agents_; }
    const std::map<MessageId, Message>& messages() const { return messages_; }
    const std::map<ChainId, ChainState>& chains() const { return chains_; }
    const StatementStore& store() const { return store_; }
    const std::vector<TraceRecord>& trace() const { return trace_; }
    const RunConfig& config() const { return cfg_; }

    const Agent& agent_at(const AgentId& id) const;
    const Message& message_at(const MessageId& id) const;

private:
    void on(const DeclareAgent& ev);
    void on(const Configure& ev);
    void on(const SendEvent& ev);
    void on(const ForwardEvent& ev);
    void on(const ReconcileEvent& ev);
    void on(const JudgeEvent& ev);
    void on(const ObserveEvent& ev);
    void on(const ExpectEvent& ev);

    Agent& mutable_agent(const AgentId& id);
    Message& mutable_message(const MessageId& id);

    void record(TraceRecord::Kind kind, const std::string& entity, const std::string& dim,
                double old_value, double new_value, const ChainId& cause);
    void record_dimensioned(TraceRecord::Kind kind, const std::string& entity,
                            const Dimensioned& before, const Dimensioned& after,
                            const ChainId& cause);

    void assert_into_store(const Message& msg);
    void apply_delta_to_message(Message& msg, const DeltaMap& delta, const ChainId& cause);
    void update_agent(const AgentId& id, const DeltaMap& delta, const std::string& cause_msg,
                      const ChainId& cause_chain);

    // Decompose the message's reliability change over its chain parts and
    // push each part's share upstream as a backward hop, stopping at the
    // first suppressed edge.
    void propagate_message_change(const MessageId& id, const Dimensioned& old_reliability);

    RunConfig cfg_;
    std::map<AgentId, Agent> agents_;
    std::map<MessageId, Message> messages_;
    std::map<ChainId, ChainState> chains_;
    std::map<MessageId, bool> live_;  // chain tips eligible for reconciliation
    StatementStore store_;
    std::vector<TraceRecord> trace_;
    std::size_t chain_counter_ = 0;
    std::size_t step_ = 0;
};

Engine run_scenario(const std::vector<ParsedEvent>& events, RunConfig base = {});

std::string format_trace(const std::vector<TraceRecord>& trace);
const char* trace_kind_name(TraceRecord::Kind kind);

// Output of the `query` subcommand: accepted statements at tau, one per
// line, sorted by key.
std::string format_query(const Engine& engine, double tau);

// Output of the `explain` subcommand: entity history plus every chain
// that touched it.
std::string format_explain(const Engine& engine, const std::string& entity);

}  // namespace relprop
