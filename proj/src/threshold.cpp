#include "relprop/threshold.hpp"

#include <algorithm>

namespace relprop {

std::string StatementKey::canonical() const {
    return topic + "/" + claim + "/" + (affirmed ? "+" : "-");
}

StatementKey statement_key(const MessageContent& content) {
    if (const auto* n = std::get_if<NumericClaim>(&content))
        return {n->topic, n->value_token, true};
    if (const auto* p = std::get_if<PropositionClaim>(&content))
        return {p->topic, p->claim, p->affirmed};
    throw Error(ErrorCode::NotAStatement, "reliability judgements are not statements");
}

StatementKey or_key(const StatementKey& k1, const StatementKey& k2) {
    const std::string a = k1.canonical();
    const std::string b = k2.canonical();
    return {"or", a < b ? a + "|" + b : b + "|" + a, true};
}

double av_or(const Dimensioned& rho, double def) {
    return rho.empty() ? def : average(rho).value();
}

void StatementStore::assert_message(const Message& msg) {
    assert_direct(statement_key(msg.content), msg.reliability, msg.id);
}

void StatementStore::assert_direct(const StatementKey& key, const Dimensioned& reliability,
                                   const MessageId& supporter) {
    auto it = statements_.find(key);
    if (it == statements_.end()) {
        statements_.emplace(key, Statement{key, reliability, {supporter}});
        return;
    }
    it->second.reliability =
        lift_elementwise(or_combine, it->second.reliability, reliability, Scalar(0.0));
    it->second.supporters.push_back(supporter);
}

std::vector<Statement> StatementStore::accepted_at(Scalar tau, bool per_dimension) const {
    std::vector<Statement> out;
    for (const auto& [key, stmt] : statements_) {
        bool ok;
        if (per_dimension) {
            ok = !stmt.reliability.empty() || tau.value() <= 0.0;
            for (const auto& [dim, v] : stmt.reliability)
                if (v.value() < tau.value()) ok = false;
        } else {
            ok = av_or(stmt.reliability) >= tau.value();
        }
        if (ok) out.push_back(stmt);
    }
    return out;
}

Statement StatementStore::compound_or(const StatementKey& k1, const StatementKey& k2) const {
    const Statement* s1 = find(k1);
    const Statement* s2 = find(k2);
    if (!s1) throw Error(ErrorCode::UnknownStatement, k1.canonical());
    if (!s2) throw Error(ErrorCode::UnknownStatement, k2.canonical());

    Statement out;
    out.key = or_key(k1, k2);
    out.reliability = lift_elementwise(or_combine, s1->reliability, s2->reliability, Scalar(0.0));
    out.supporters = s1->supporters;
    out.supporters.insert(out.supporters.end(), s2->supporters.begin(), s2->supporters.end());

    if (const Statement* direct = find(out.key)) {
        out.reliability =
            lift_elementwise(or_combine, out.reliability, direct->reliability, Scalar(0.0));
        out.supporters.insert(out.supporters.end(), direct->supporters.begin(),
                              direct->supporters.end());
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> StatementStore::conflict_report(
    Scalar tau) const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [key, stmt] : statements_) {
        if (!key.affirmed) continue;
        if (av_or(stmt.reliability) < tau.value()) continue;
        auto neg = statements_.find(StatementKey{key.topic, key.claim, false});
        if (neg == statements_.end()) continue;
        if (av_or(neg->second.reliability) >= tau.value())
            out.emplace_back(key.topic, key.claim);
    }
    return out;
}

const Statement* StatementStore::find(const StatementKey& key) const {
    auto it = statements_.find(key);
    return it == statements_.end() ? nullptr : &it->second;
}

}  // namespace relprop
