#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "relprop/network.hpp"

namespace relprop {

struct DeclareAgent {
    AgentId id;
    Dimensioned reliability;
    double inertia = 1.0;
};

struct Configure {
    std::string parameter;  // alpha|lambda_agree|lambda_disagree|epsilon|dim_default|tau
    double value = 0.0;
};

struct SendEvent {
    MessageId id;
    std::optional<ChainId> chain;
    AgentId from;
    AgentId to;
    MessageContent content;
    std::optional<Dimensioned> declared;
};

struct ForwardEvent {
    MessageId id;
    MessageId prior;
    AgentId from;
    AgentId to;
    std::optional<double> value;       // numeric modification, if any
    std::optional<std::string> value_token;
};

struct ReconcileEvent {
    std::string topic;
};

struct JudgeEvent {
    MessageId id;
    AgentId from;
    AgentId to;
    bool target_is_agent = true;
    std::string target;
    Dimensioned judged;
    std::optional<Dimensioned> declared;
};

struct ObserveEvent {
    MessageId id;
    MessageId against;
};

enum class Comparator { Lt, Le, Eq, Ge, Gt };

struct ExpectEvent {
    bool entity_is_agent = true;
    std::string entity;
    std::optional<std::string> dimension;
    Comparator cmp = Comparator::Eq;
    double value = 0.0;
};

using ScenarioEvent = std::variant<DeclareAgent, Configure, SendEvent, ForwardEvent,
                                   ReconcileEvent, JudgeEvent, ObserveEvent, ExpectEvent>;

struct ParsedEvent {
    ScenarioEvent event;
    int line = 0;
};

// Line-oriented scenario grammar; '#' starts a comment. Any malformed
// line raises ParseError with its line number.
std::vector<ParsedEvent> parse_scenario(std::istream& in);
std::vector<ParsedEvent> parse_scenario(const std::string& text);
std::vector<ParsedEvent> parse_scenario_file(const std::string& path);

}  // namespace relprop
