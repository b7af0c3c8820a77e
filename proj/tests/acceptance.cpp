// Acceptance suite: one line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "relprop/engine.hpp"

using namespace relprop;

namespace {

const std::string kScenarioDir = RELPROP_SCENARIO_DIR;

const std::vector<std::string> kCorpus = {
    "chain_breakdown.rp", "cycles_a.rp",  "cycles_a_replay.rp", "cycles_b.rp",
    "cycles_b_replay.rp", "outlier.rp",   "size.rp",            "transmission_check.rp",
    "two_chains.rp",      "two_lines_agree.rp", "two_lines_disagree.rp"};

Engine run_file(const std::string& name) {
    return run_scenario(parse_scenario_file(kScenarioDir + "/" + name));
}

double msg_av(const Engine& e, const MessageId& id) {
    return av_or(e.message_at(id).reliability);
}

double agent_av(const Engine& e, const AgentId& id) {
    return av_or(e.agent_at(id).reliability);
}

std::size_t count_updates(const Engine& e, const std::string& entity) {
    std::size_t n = 0;
    for (const auto& r : e.trace())
        if (r.kind == TraceRecord::Kind::Update && r.entity == entity) ++n;
    return n;
}

std::size_t count_kind(const Engine& e, TraceRecord::Kind kind) {
    std::size_t n = 0;
    for (const auto& r : e.trace())
        if (r.kind == kind) ++n;
    return n;
}

struct Criterion {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (cond) return;
        ok = false;
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

// ---- 1: boundedness under random event sequences ------------------------

Dimensioned random_rel(std::mt19937& rng, int dims) {
    std::uniform_real_distribution<double> v(-1.0, 1.0);
    Dimensioned out;
    for (int i = 0; i < dims; ++i) out["d" + std::to_string(i)] = Scalar(v(rng));
    return out;
}

Criterion criterion_boundedness() {
    Criterion c;
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> kind(0, 5);
    std::uniform_int_distribution<int> topic_pick(0, 2);
    const std::vector<std::string> topics = {"t0", "t1", "t2"};

    for (int seq = 0; seq < 10000 && c.ok; ++seq) {
        Engine e;
        std::uniform_int_distribution<int> agent_count(3, 6);
        const int n_agents = agent_count(rng);
        std::vector<AgentId> agents;
        for (int i = 0; i < n_agents; ++i) {
            const AgentId id = "A" + std::to_string(i);
            e.apply(DeclareAgent{id, random_rel(rng, 1 + seq % 2),
                                 static_cast<double>(seq % 3)});
            agents.push_back(id);
        }
        std::uniform_int_distribution<int> agent_pick(0, n_agents - 1);
        std::vector<MessageId> msgs;
        int next_msg = 0;

        std::uniform_int_distribution<int> evs(1, 50);
        const int n_events = evs(rng);
        for (int i = 0; i < n_events; ++i) {
            const AgentId from = agents[agent_pick(rng)];
            const AgentId to = agents[agent_pick(rng)];
            const std::string topic = topics[topic_pick(rng)];
            const MessageId mid = "M" + std::to_string(next_msg);
            try {
                switch (kind(rng)) {
                    case 0:
                    case 1: {
                        std::optional<Dimensioned> declared;
                        if (unit(rng) < 0.5) declared = random_rel(rng, 1);
                        const double value = std::floor(unit(rng) * 10.0);
                        e.apply(SendEvent{mid, std::nullopt, from, to,
                                          NumericClaim{topic, value,
                                                       std::to_string(static_cast<int>(value))},
                                          declared});
                        msgs.push_back(mid);
                        ++next_msg;
                        break;
                    }
                    case 2: {
                        if (msgs.empty()) break;
                        std::uniform_int_distribution<std::size_t> mp(0, msgs.size() - 1);
                        e.apply(ForwardEvent{mid, msgs[mp(rng)], from, to, std::nullopt,
                                             std::nullopt});
                        msgs.push_back(mid);
                        ++next_msg;
                        break;
                    }
                    case 3:
                        e.apply(ReconcileEvent{topic});
                        break;
                    case 4: {
                        const bool on_agent = msgs.empty() || unit(rng) < 0.5;
                        std::string target = to;
                        if (!on_agent) {
                            std::uniform_int_distribution<std::size_t> mp(0, msgs.size() - 1);
                            target = msgs[mp(rng)];
                        }
                        e.apply(JudgeEvent{mid, from, to, on_agent, target,
                                           random_rel(rng, 1), std::nullopt});
                        msgs.push_back(mid);
                        ++next_msg;
                        break;
                    }
                    case 5: {
                        if (msgs.size() < 2) break;
                        std::uniform_int_distribution<std::size_t> mp(0, msgs.size() - 1);
                        e.apply(ObserveEvent{msgs[mp(rng)], msgs[mp(rng)]});
                        break;
                    }
                }
            } catch (const Error&) {
                // rejected events are fine; bounds must hold regardless
            }
        }

        const auto in_range = [](const Dimensioned& rel) {
            for (const auto& [dim, v] : rel)
                if (v.value() < -1.0 || v.value() > 1.0) return false;
            return true;
        };
        for (const auto& [id, agent] : e.agents())
            c.require(in_range(agent.reliability), "agent " + id + " out of range, seq " +
                                                       std::to_string(seq));
        for (const auto& [id, msg] : e.messages())
            c.require(in_range(msg.reliability), "message " + id + " out of range, seq " +
                                                     std::to_string(seq));
        for (const auto& [key, stmt] : e.store().statements())
            c.require(in_range(stmt.reliability),
                      "statement " + key.canonical() + " out of range");
    }
    return c;
}

// ---- 2: pairwise reconciliation direction and magnitude -----------------

Criterion criterion_reconcile_direction() {
    Criterion c;
    const Engine agree = run_file("two_lines_agree.rp");
    const double t_gain = msg_av(agree, "t") - 0.6;
    const double tp_gain = msg_av(agree, "tp") - 0.4;
    c.require(t_gain > 0.0, "agree: stronger line did not gain");
    c.require(tp_gain > 0.0, "agree: weaker line did not gain");
    c.require(tp_gain > t_gain, "agree: weaker line did not gain more");

    const Engine disagree = run_file("two_lines_disagree.rp");
    const double t_loss = 0.6 - msg_av(disagree, "t");
    const double tp_loss = 0.4 - msg_av(disagree, "tp");
    c.require(t_loss > 0.0, "disagree: stronger line did not lose");
    c.require(tp_loss > 0.0, "disagree: weaker line did not lose");
    c.require(tp_loss > t_loss, "disagree: weaker line did not lose more");
    return c;
}

// ---- 3: chain breakdown consistency -------------------------------------

Criterion criterion_chain_breakdown() {
    Criterion c;
    const auto combined_matches = [&](const Engine& e, const AgentId& a, const AgentId& b,
                                      const MessageId& m) {
        const Dimensioned via_agents = chain_combine(
            {e.agent_at(a).reliability, e.agent_at(b).reliability}, e.config().prop);
        return std::abs(av_or(via_agents) - msg_av(e, m)) <= 1e-9;
    };

    const Engine one = run_file("chain_breakdown.rp");
    c.require(msg_av(one, "ht") < 0.7, "single chain: combined value did not drop");
    c.require(combined_matches(one, "h", "t", "ht"),
              "single chain: decomposed parts do not recombine to the chain value");

    const Engine two = run_file("two_chains.rp");
    c.require(msg_av(two, "ht") < 0.7, "chain 1: combined value did not drop");
    c.require(msg_av(two, "ht2") < 0.6, "chain 2: combined value did not drop");
    c.require(combined_matches(two, "h", "t", "ht"), "chain 1 recombination mismatch");
    c.require(combined_matches(two, "h2", "t2", "ht2"), "chain 2 recombination mismatch");
    return c;
}

// ---- 4: cycle suppression ------------------------------------------------

Criterion criterion_cycles() {
    Criterion c;
    const auto compare = [&](const std::string& base_name, const std::string& replay_name,
                             const std::vector<std::string>& once_updated) {
        const Engine base = run_file(base_name);
        const Engine replay = run_file(replay_name);

        for (const auto& entity : once_updated)
            c.require(count_updates(base, entity) == 1,
                      base_name + ": " + entity + " not updated exactly once");

        c.require(count_kind(replay, TraceRecord::Kind::Suppressed) == 10,
                  replay_name + ": expected exactly 10 suppressed hops");
        for (const auto& [id, agent] : base.agents())
            c.require(agent.reliability == replay.agent_at(id).reliability,
                      replay_name + ": replay changed agent " + id);
        for (const auto& [id, msg] : base.messages())
            c.require(msg.reliability == replay.message_at(id).reliability,
                      replay_name + ": replay changed message " + id);
        c.require(count_kind(base, TraceRecord::Kind::Update) ==
                      count_kind(replay, TraceRecord::Kind::Update),
                  replay_name + ": replay added update records");
    };
    compare("cycles_a.rp", "cycles_a_replay.rp", {"App", "Mp", "B", "M", "A"});
    compare("cycles_b.rp", "cycles_b_replay.rp", {"Ap", "A"});
    return c;
}

// ---- 5: majority pair outranks the outlier ------------------------------

Criterion criterion_outlier() {
    Criterion c;
    const Engine e = run_file("outlier.rp");
    c.require(agent_av(e, "Sneg") < agent_av(e, "S8"), "outlier source not below source 8");
    c.require(agent_av(e, "Sneg") < agent_av(e, "S9"), "outlier source not below source 9");
    c.require(agent_av(e, "S8") > 0.5, "source 8 did not gain");
    c.require(agent_av(e, "S9") > 0.5, "source 9 did not gain");
    c.require(msg_av(e, "Mneg") < msg_av(e, "M8"), "outlier report not below report 8");
    c.require(msg_av(e, "Mneg") < msg_av(e, "M9"), "outlier report not below report 9");
    return c;
}

// ---- 6: decomposition recombines to the target --------------------------

Criterion criterion_decompose() {
    Criterion c;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> v(-1.0, 1.0);
    std::uniform_int_distribution<int> len(1, 4);
    std::uniform_int_distribution<int> dims(1, 2);
    std::uniform_int_distribution<int> alpha_pick(0, 1);

    for (int i = 0; i < 1000; ++i) {
        PropagationConfig cfg;
        cfg.alpha = alpha_pick(rng) ? 1.0 : 0.5;
        const int nd = dims(rng);
        std::vector<Dimensioned> parts(len(rng));
        for (auto& p : parts) p = random_rel(rng, nd);
        const Dimensioned old_combined = chain_combine(parts, cfg);
        // targets are drawn from the image of chain_combine, [-alpha, alpha]
        Dimensioned target;
        for (const auto& [dim, unused] : old_combined)
            target[dim] = Scalar(v(rng) * cfg.alpha);

        const auto new_parts = chain_decompose(parts, old_combined, target, cfg);
        const Dimensioned recombined = chain_combine(new_parts, cfg);

        bool clamped = false;
        for (const auto& p : new_parts)
            for (const auto& [dim, val] : p)
                if (std::abs(val.value()) == 1.0) clamped = true;

        for (const auto& [dim, val] : recombined) {
            c.require(val.value() <= target.at(dim).value() + 1e-9,
                      "instance " + std::to_string(i) + ": recombined above target");
            if (!clamped)
                c.require(std::abs(val.value() - target.at(dim).value()) <= 1e-9,
                          "instance " + std::to_string(i) + ": unclamped recombination drift");
        }
    }
    return c;
}

// ---- 7: dominance weights ------------------------------------------------

Criterion criterion_dominance() {
    Criterion c;
    std::mt19937 rng(13);
    std::uniform_int_distribution<int> dims(1, 4);
    for (int i = 0; i < 1000; ++i) {
        const auto a = random_rel(rng, dims(rng));
        const auto b = random_rel(rng, dims(rng));
        const auto [w1, w2] = dominance_weights(a, b);
        const double d = std::max(w1, w2);
        c.require(d >= 0.5 && d <= 1.0, "dominant weight outside [0.5, 1]");
        c.require(std::abs(w1 + w2 - 1.0) <= 1e-9, "weights do not sum to 1");
    }
    return c;
}

// ---- 8: threshold monotonicity and polarity independence ----------------

Criterion criterion_threshold() {
    Criterion c;
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> v(-1.0, 1.0);
    std::uniform_int_distribution<int> claim(0, 4);
    std::bernoulli_distribution pol(0.5);

    for (int round = 0; round < 1000; ++round) {
        StatementStore store;
        const int n = 2 + claim(rng);
        for (int i = 0; i < n; ++i) {
            const bool affirmed = pol(rng);
            const std::string cl = "c" + std::to_string(claim(rng));
            const StatementKey other{"t", cl, !affirmed};
            const Statement* before = store.find(other);
            const Dimensioned prior = before ? before->reliability : Dimensioned{};

            Message m;
            m.id = "M" + std::to_string(i);
            m.content = PropositionClaim{"t", cl, affirmed};
            m.reliability = {{kDefaultDimension, Scalar(v(rng))}};
            store.assert_message(m);

            const Statement* after = store.find(other);
            c.require((after ? after->reliability : Dimensioned{}) == prior,
                      "polarity independence violated");
        }

        double t1 = v(rng), t2 = v(rng);
        if (t1 > t2) std::swap(t1, t2);
        const auto wide = store.accepted_at(Scalar(t1));
        const auto narrow = store.accepted_at(Scalar(t2));
        for (const auto& stmt : narrow) {
            const bool contained =
                std::any_of(wide.begin(), wide.end(),
                            [&](const Statement& s) { return s.key == stmt.key; });
            c.require(contained, "higher threshold accepted a statement the lower one rejects");
        }
    }
    return c;
}

// ---- 9: determinism ------------------------------------------------------

Criterion criterion_determinism() {
    Criterion c;
    for (const auto& name : kCorpus) {
        const Engine a = run_file(name);
        const Engine b = run_file(name);
        c.require(format_trace(a.trace()) == format_trace(b.trace()),
                  name + ": traces differ between runs");
    }
    const Engine size = run_file("size.rp");
    c.require(format_query(size, 0.5).find("size/101/+") != std::string::npos,
              "query at tau 0.5 does not report the 101 statement");
    return c;
}

// ---- 10: combine oracle --------------------------------------------------

Criterion criterion_oracle() {
    Criterion c;
    const std::vector<double> grid = {-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0};
    const std::vector<double> alphas = {0.0, 0.25, 0.5, 0.75, 1.0};

    std::vector<std::vector<double>> tuples = {{}};
    for (int length = 1; length <= 4; ++length) {
        std::vector<std::vector<double>> next;
        for (const auto& t : tuples)
            for (const double g : grid) {
                auto u = t;
                u.push_back(g);
                next.push_back(std::move(u));
            }
        tuples = std::move(next);

        for (const double alpha : alphas) {
            PropagationConfig cfg;
            cfg.alpha = alpha;
            for (const auto& t : tuples) {
                std::vector<Dimensioned> parts;
                for (const double g : t) parts.push_back({{kDefaultDimension, Scalar(g)}});
                const double got =
                    chain_combine(parts, cfg).at(kDefaultDimension).value();
                const double want = alpha * *std::min_element(t.begin(), t.end());
                c.require(got == want, "combine mismatch at alpha " + std::to_string(alpha));
                if (!c.ok) return c;
            }
        }
    }
    return c;
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        Criterion (*run)();
    };
    const Entry entries[] = {
        {"boundedness under random event sequences", criterion_boundedness},
        {"reconciliation direction and relative magnitude", criterion_reconcile_direction},
        {"chain drop decomposes and recombines consistently", criterion_chain_breakdown},
        {"cycle replays suppressed, updates applied once", criterion_cycles},
        {"majority pair outranks the outlier", criterion_outlier},
        {"decomposition recombines to the target", criterion_decompose},
        {"dominance weights bounded and normalized", criterion_dominance},
        {"threshold monotonic and polarity independent", criterion_threshold},
        {"byte-identical traces, query finds accepted value", criterion_determinism},
        {"chain combine matches brute-force oracle", criterion_oracle},
    };

    int failures = 0;
    int index = 0;
    for (const auto& entry : entries) {
        ++index;
        Criterion result;
        try {
            result = entry.run();
        } catch (const std::exception& e) {
            result.ok = false;
            result.detail = std::string("exception: ") + e.what();
        }
        std::printf("%s %2d: %s%s%s\n", result.ok ? "PASS" : "FAIL", index, entry.name,
                    result.detail.empty() ? "" : " -- ", result.detail.c_str());
        if (!result.ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
