#pragma once

#include <compare>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "relprop/network.hpp"

namespace relprop {

struct StatementKey {
    std::string topic;
    std::string claim;  // value token for numeric claims
    bool affirmed = true;

    auto operator<=>(const StatementKey&) const = default;

    std::string canonical() const;  // "topic/claim/+" or "topic/claim/-"
};

StatementKey statement_key(const MessageContent& content);  // NotAStatement for judgements
StatementKey or_key(const StatementKey& k1, const StatementKey& k2);

struct Statement {
    StatementKey key;
    Dimensioned reliability;
    std::vector<MessageId> supporters;
};

// Topic-keyed belief store. Affirmed and negated claims are held
// independently; nothing ever derives one polarity from the other.
class StatementStore {
public:
    // Creates the statement at the message's reliability, or raises the
    // stored one via elementwise or_combine. Judgement content is rejected.
    void assert_message(const Message& msg);

    // Direct assertion under an arbitrary key (also how a compound
    // disjunction acquires reliability of its own).
    void assert_direct(const StatementKey& key, const Dimensioned& reliability,
                       const MessageId& supporter);

    // Statements whose av(reliability) >= tau; with per_dimension set,
    // every dimension must meet tau instead.
    std::vector<Statement> accepted_at(Scalar tau, bool per_dimension = false) const;

    // Disjunction of two stored statements: elementwise max of the
    // components, raised further by any directly asserted compound value.
    Statement compound_or(const StatementKey& k1, const StatementKey& k2) const;

    // (topic, claim) pairs where both polarities reach tau.
    std::vector<std::pair<std::string, std::string>> conflict_report(Scalar tau) const;

    const Statement* find(const StatementKey& key) const;
    const std::map<StatementKey, Statement>& statements() const { return statements_; }

private:
    std::map<StatementKey, Statement> statements_;
};

// av(reliability), with the clean-slate empty map counting as def.
double av_or(const Dimensioned& rho, double def = 0.0);

}  // namespace relprop
