#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "relprop/algebra.hpp"

namespace relprop {

using AgentId = std::string;
using MessageId = std::string;
using ChainId = std::string;

// Dimension name used when an entity is declared with a bare scalar.
inline const std::string kDefaultDimension = "default";

enum class Direction { Forward, Backward };

struct NumericClaim {
    std::string topic;
    double value = 0.0;
    std::string value_token;  // original spelling, used as the statement bucket
};

struct PropositionClaim {
    std::string topic;
    std::string claim;
    bool affirmed = true;
};

struct ReliabilityJudgement {
    bool target_is_agent = true;
    std::string target;  // AgentId or MessageId
    Dimensioned judged;
};

using MessageContent = std::variant<NumericClaim, PropositionClaim, ReliabilityJudgement>;

const std::string& content_topic(const MessageContent& content);  // "" for judgements

struct Hop {
    AgentId source;
    AgentId destination;
    Direction direction = Direction::Forward;
    MessageContent content;    // value snapshot at this hop
    Dimensioned reliability;   // reliability snapshot (the hop's chain contribution)
};

struct AgentHistoryEntry {
    Dimensioned prior;
    std::string cause;  // MessageId or event tag
};

struct Agent {
    AgentId id;
    Dimensioned reliability;
    double inertia = 1.0;
    std::vector<AgentHistoryEntry> history;
};

struct Message {
    MessageId id;
    ChainId chain;
    MessageContent content;
    Dimensioned reliability;
    std::vector<Hop> hops;

    std::size_t forward_hop_count() const;
};

struct Edge {
    AgentId source;
    AgentId destination;
    Direction direction = Direction::Forward;
};

bool has_traversed(const Message& msg, const Edge& edge);

// Appends the hop unless its directed edge already occurs in msg.hops;
// a duplicate edge means the chain would retrace itself, and the result
// is empty (cycle detected). msg is untouched either way.
std::optional<Message> extend_chain(const Message& msg, const Hop& hop);

}  // namespace relprop
