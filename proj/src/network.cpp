#include "relprop/network.hpp"

namespace relprop {

namespace {
const std::string kEmpty;
}

const std::string& content_topic(const MessageContent& content) {
    if (const auto* n = std::get_if<NumericClaim>(&content)) return n->topic;
    if (const auto* p = std::get_if<PropositionClaim>(&content)) return p->topic;
    return kEmpty;
}

std::size_t Message::forward_hop_count() const {
    std::size_t n = 0;
    for (const auto& hop : hops)
        if (hop.direction == Direction::Forward) ++n;
    return n;
}

bool has_traversed(const Message& msg, const Edge& edge) {
    for (const auto& hop : msg.hops) {
        if (hop.source == edge.source && hop.destination == edge.destination &&
            hop.direction == edge.direction)
            return true;
    }
    return false;
}

std::optional<Message> extend_chain(const Message& msg, const Hop& hop) {
    if (has_traversed(msg, Edge{hop.source, hop.destination, hop.direction}))
        return std::nullopt;
    Message out = msg;
    out.hops.push_back(hop);
    return out;
}

}  // namespace relprop
