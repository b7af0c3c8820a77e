#include "relprop/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace relprop {

namespace {

double parse_real(const std::string& tok, int line) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + tok.size() || tok.empty())
        throw ParseError(line, "malformed number '" + tok + "'");
    if (!std::isfinite(v)) throw ParseError(line, "number must be finite: '" + tok + "'");
    return v;
}

// "<r>" or "<dim>:<r>,<dim>:<r>,..."
Dimensioned parse_reliability(const std::string& tok, int line) {
    Dimensioned out;
    if (tok.find(':') == std::string::npos) {
        out[kDefaultDimension] = Scalar(parse_real(tok, line));
        return out;
    }
    std::stringstream ss(tok);
    std::string entry;
    while (std::getline(ss, entry, ',')) {
        const auto colon = entry.find(':');
        if (colon == std::string::npos || colon == 0)
            throw ParseError(line, "malformed reliability entry '" + entry + "'");
        const std::string dim = entry.substr(0, colon);
        if (out.count(dim)) throw ParseError(line, "duplicate dimension '" + dim + "'");
        out[dim] = Scalar(parse_real(entry.substr(colon + 1), line));
    }
    if (out.empty()) throw ParseError(line, "empty reliability '" + tok + "'");
    return out;
}

// "agent:<id>" or "msg:<id>" -> (is_agent, id)
std::pair<bool, std::string> parse_entity_ref(const std::string& tok, int line) {
    if (tok.rfind("agent:", 0) == 0 && tok.size() > 6) return {true, tok.substr(6)};
    if (tok.rfind("msg:", 0) == 0 && tok.size() > 4) return {false, tok.substr(4)};
    throw ParseError(line, "expected agent:<id> or msg:<id>, got '" + tok + "'");
}

class Fields {
public:
    Fields(const std::vector<std::string>& toks, std::size_t first, int line) : line_(line) {
        for (std::size_t i = first; i < toks.size(); ++i) {
            const auto eq = toks[i].find('=');
            if (eq == std::string::npos || eq == 0)
                throw ParseError(line, "expected key=value, got '" + toks[i] + "'");
            const std::string key = toks[i].substr(0, eq);
            if (fields_.count(key)) throw ParseError(line, "duplicate field '" + key + "'");
            fields_[key] = toks[i].substr(eq + 1);
        }
    }

    std::string require(const std::string& key) {
        auto it = fields_.find(key);
        if (it == fields_.end()) throw ParseError(line_, "missing field '" + key + "'");
        used_.insert(key);
        return it->second;
    }

    std::optional<std::string> optional(const std::string& key) {
        auto it = fields_.find(key);
        if (it == fields_.end()) return std::nullopt;
        used_.insert(key);
        return it->second;
    }

    void finish() const {
        for (const auto& [key, value] : fields_)
            if (!used_.count(key)) throw ParseError(line_, "unknown field '" + key + "'");
    }

private:
    int line_;
    std::map<std::string, std::string> fields_;
    std::set<std::string> used_;
};

const std::set<std::string> kConfigKeys = {"alpha",   "lambda_agree", "lambda_disagree",
                                           "epsilon", "dim_default",  "tau"};

std::string positional(const std::vector<std::string>& toks, std::size_t idx, int line,
                       const std::string& what) {
    if (idx >= toks.size() || toks[idx].find('=') != std::string::npos)
        throw ParseError(line, "missing " + what);
    return toks[idx];
}

ScenarioEvent parse_line(const std::vector<std::string>& toks, int line) {
    const std::string& kw = toks[0];

    if (kw == "agent") {
        DeclareAgent ev;
        ev.id = positional(toks, 1, line, "agent id");
        Fields f(toks, 2, line);
        ev.reliability = parse_reliability(f.require("rel"), line);
        if (auto inertia = f.optional("inertia")) {
            ev.inertia = parse_real(*inertia, line);
            if (ev.inertia < 0.0) throw ParseError(line, "inertia must be >= 0");
        }
        f.finish();
        return ev;
    }

    if (kw == "config") {
        Fields f(toks, 1, line);
        for (const auto& key : kConfigKeys) {
            if (auto v = f.optional(key)) {
                f.finish();
                return Configure{key, parse_real(*v, line)};
            }
        }
        throw ParseError(line, "config expects one of alpha, lambda_agree, lambda_disagree, "
                               "epsilon, dim_default, tau");
    }

    if (kw == "send") {
        SendEvent ev;
        ev.id = positional(toks, 1, line, "message id");
        Fields f(toks, 2, line);
        ev.chain = f.optional("chain");
        ev.from = f.require("from");
        ev.to = f.require("to");
        const std::string topic = f.require("topic");
        auto value = f.optional("value");
        auto claim = f.optional("claim");
        if (value && claim) throw ParseError(line, "send takes value= or claim=, not both");
        if (value) {
            ev.content = NumericClaim{topic, parse_real(*value, line), *value};
        } else if (claim) {
            const std::string pol = f.require("pol");
            if (pol != "+" && pol != "-") throw ParseError(line, "pol must be + or -");
            ev.content = PropositionClaim{topic, *claim, pol == "+"};
        } else {
            throw ParseError(line, "send needs value= or claim=");
        }
        if (auto rel = f.optional("rel")) ev.declared = parse_reliability(*rel, line);
        f.finish();
        return ev;
    }

    if (kw == "forward") {
        ForwardEvent ev;
        ev.id = positional(toks, 1, line, "message id");
        Fields f(toks, 2, line);
        ev.prior = f.require("prior");
        ev.from = f.require("from");
        ev.to = f.require("to");
        if (auto value = f.optional("value")) {
            ev.value = parse_real(*value, line);
            ev.value_token = *value;
        }
        f.finish();
        return ev;
    }

    if (kw == "judge") {
        JudgeEvent ev;
        ev.id = positional(toks, 1, line, "message id");
        Fields f(toks, 2, line);
        ev.from = f.require("from");
        ev.to = f.require("to");
        std::tie(ev.target_is_agent, ev.target) = parse_entity_ref(f.require("target"), line);
        ev.judged = parse_reliability(f.require("judged"), line);
        if (auto rel = f.optional("rel")) ev.declared = parse_reliability(*rel, line);
        f.finish();
        return ev;
    }

    if (kw == "reconcile") {
        Fields f(toks, 1, line);
        ReconcileEvent ev{f.require("topic")};
        f.finish();
        return ev;
    }

    if (kw == "observe") {
        ObserveEvent ev;
        ev.id = positional(toks, 1, line, "message id");
        Fields f(toks, 2, line);
        ev.against = f.require("against");
        f.finish();
        return ev;
    }

    if (kw == "expect") {
        ExpectEvent ev;
        std::tie(ev.entity_is_agent, ev.entity) =
            parse_entity_ref(positional(toks, 1, line, "entity"), line);
        Fields f(toks, 2, line);
        ev.dimension = f.optional("dim");
        const std::string cmp = f.require("cmp");
        if (cmp == "lt") ev.cmp = Comparator::Lt;
        else if (cmp == "le") ev.cmp = Comparator::Le;
        else if (cmp == "eq") ev.cmp = Comparator::Eq;
        else if (cmp == "ge") ev.cmp = Comparator::Ge;
        else if (cmp == "gt") ev.cmp = Comparator::Gt;
        else throw ParseError(line, "cmp must be one of lt, le, eq, ge, gt");
        ev.value = parse_real(f.require("val"), line);
        f.finish();
        return ev;
    }

    throw ParseError(line, "unknown keyword '" + kw + "'");
}

}  // namespace

std::vector<ParsedEvent> parse_scenario(std::istream& in) {
    std::vector<ParsedEvent> out;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::stringstream ss(raw);
        std::vector<std::string> toks;
        std::string tok;
        while (ss >> tok) toks.push_back(tok);
        if (toks.empty()) continue;
        try {
            out.push_back({parse_line(toks, line), line});
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(line, e.what());
        }
    }
    return out;
}

std::vector<ParsedEvent> parse_scenario(const std::string& text) {
    std::istringstream ss(text);
    return parse_scenario(ss);
}

std::vector<ParsedEvent> parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::UnknownEntity, "cannot open scenario file " + path);
    return parse_scenario(in);
}

}  // namespace relprop
