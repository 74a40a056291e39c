// Copyright 2026 The darkrsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "darkrsp/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace darkrsp {

namespace {

using json = nlohmann::json;

[[noreturn]] void parse_fail(const std::string &where, const std::string &what) {
    fail(ErrorCode::Parse, where + ": " + what);
}

void check_keys(const json &obj, const std::set<std::string> &allowed, const std::string &where) {
    for (const auto &[key, _] : obj.items()) {
        if (!allowed.count(key)) {
            parse_fail(where, "unknown key '" + key + "'");
        }
    }
}

template <class T>
T get_as(const json &obj, const std::string &key, const std::string &where) {
    if (!obj.contains(key)) {
        parse_fail(where, "missing key '" + key + "'");
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception &) {
        parse_fail(where, "key '" + key + "' has the wrong type");
    }
}

double get_number(const json &obj, const std::string &key, const std::string &where) {
    if (!obj.contains(key) || !obj.at(key).is_number()) {
        parse_fail(where, "key '" + key + "' must be a number");
    }
    return obj.at(key).get<double>();
}

std::uint64_t get_count(const json &obj, const std::string &key, const std::string &where) {
    if (!obj.contains(key) || !obj.at(key).is_number_integer() || obj.at(key).get<std::int64_t>() < 0) {
        parse_fail(where, "key '" + key + "' must be a non-negative integer");
    }
    return obj.at(key).get<std::uint64_t>();
}

std::uint64_t parse_u64(std::string_view s, const std::string &where) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        parse_fail(where, "expected an unsigned integer, got '" + std::string(s) + "'");
    }
    return v;
}

DarkStateSpec parse_resource(const json &j, const std::string &where) {
    if (!j.is_object()) {
        parse_fail(where, "resource must be an object");
    }
    const auto kind = get_as<std::string>(j, "kind", where);
    if (kind == "Singlet" || kind == "FourQubitA" || kind == "FourQubitB") {
        check_keys(j, {"kind"}, where);
        if (kind == "Singlet") {
            return resource::Singlet{};
        }
        if (kind == "FourQubitA") {
            return resource::FourQubitA{};
        }
        return resource::FourQubitB{};
    }
    if (kind == "SuperposedFourQubit") {
        check_keys(j, {"kind", "a", "b"}, where);
        return resource::SuperposedFourQubit{get_number(j, "a", where), get_number(j, "b", where)};
    }
    if (kind == "SingletMatchingProduct") {
        check_keys(j, {"kind", "m", "matching"}, where);
        resource::SingletMatchingProduct s;
        s.m = get_as<int>(j, "m", where);
        if (j.contains("matching")) {
            s.matching = get_as<std::vector<int>>(j, "matching", where);
        } else {
            s.matching.resize(static_cast<std::size_t>(std::max(s.m, 0)));
            for (int i = 0; i < s.m; ++i) {
                s.matching[static_cast<std::size_t>(i)] = i;
            }
        }
        return s;
    }
    if (kind == "Antisymmetric") {
        check_keys(j, {"kind", "d"}, where);
        return resource::Antisymmetric{get_as<int>(j, "d", where)};
    }
    if (kind == "AntisymmetricProduct") {
        check_keys(j, {"kind", "d", "m"}, where);
        return resource::AntisymmetricProduct{get_as<int>(j, "d", where), get_as<int>(j, "m", where)};
    }
    parse_fail(where, "unknown resource kind '" + kind + "'");
}

EnsembleSpec parse_ensemble(const json &j, const std::string &where) {
    if (!j.is_object()) {
        parse_fail(where, "ensemble must be an object");
    }
    check_keys(j, {"family", "d", "phi0"}, where);
    EnsembleSpec spec;
    spec.family = family_from_string(get_as<std::string>(j, "family", where));
    switch (spec.family) {
        case Family::QubitPolarReal:
        case Family::QubitEquatorial:
        case Family::QubitPolarImag:
        case Family::QubitFixedPhase:
            spec.d = 2;
            break;
        case Family::QutritGeneral:
        case Family::QutritEquatorial:
        case Family::QutritRestricted:
            spec.d = 3;
            break;
        case Family::QuditRestricted4:
            spec.d = 4;
            break;
        default:
            spec.d = get_as<int>(j, "d", where);
    }
    if (j.contains("d") && get_as<int>(j, "d", where) != spec.d) {
        parse_fail(where, std::string("family ") + family_name(spec.family) + " has fixed dimension " +
                              std::to_string(spec.d));
    }
    if (spec.family == Family::QubitFixedPhase) {
        spec.phi0 = get_number(j, "phi0", where);
    } else if (j.contains("phi0")) {
        parse_fail(where, "phi0 only applies to QubitFixedPhase");
    }
    return spec;
}

std::optional<RandomDraws> parse_random(const std::string &s, const std::string &where) {
    constexpr std::string_view prefix = "random:";
    if (s.rfind(prefix, 0) != 0) {
        return std::nullopt;
    }
    const std::string_view rest = std::string_view(s).substr(prefix.size());
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) {
        parse_fail(where, "random parameters must look like random:<count>:<seed>");
    }
    RandomDraws r{parse_u64(rest.substr(0, colon), where), parse_u64(rest.substr(colon + 1), where)};
    return r;
}

Expectation parse_expectation(const json &j, const std::string &where) {
    if (!j.is_object()) {
        parse_fail(where, "expect must be an object");
    }
    check_keys(j,
               {"success_probability", "tolerance", "empirical_sigma", "ebits", "cbits_per_party", "cbits_total",
                "ledger_tolerance", "min_fidelity"},
               where);
    Expectation e;
    if (j.contains("success_probability")) {
        const auto &sp = j.at("success_probability");
        if (sp.is_string() && sp.get<std::string>() == "superposed_formula") {
            e.superposed_formula = true;
        } else if (sp.is_number()) {
            e.success_probability = sp.get<double>();
        } else {
            parse_fail(where, "success_probability must be a number or \"superposed_formula\"");
        }
    }
    if (j.contains("tolerance")) {
        e.tolerance = get_number(j, "tolerance", where);
    }
    if (j.contains("empirical_sigma")) {
        e.empirical_sigma = get_number(j, "empirical_sigma", where);
    }
    if (j.contains("ebits")) {
        e.ebits = get_number(j, "ebits", where);
    }
    if (j.contains("cbits_per_party")) {
        e.cbits_per_party = get_number(j, "cbits_per_party", where);
    }
    if (j.contains("cbits_total")) {
        e.cbits_total = get_number(j, "cbits_total", where);
    }
    if (j.contains("ledger_tolerance")) {
        e.ledger_tolerance = get_number(j, "ledger_tolerance", where);
    }
    if (j.contains("min_fidelity")) {
        e.min_fidelity = get_number(j, "min_fidelity", where);
    }
    return e;
}

ScenarioEntry parse_entry(const json &j, std::size_t index) {
    const std::string where = "entry " + std::to_string(index);
    if (!j.is_object()) {
        parse_fail(where, "entry must be an object");
    }
    check_keys(j,
               {"name", "protocol", "resource", "ensemble", "params", "parties", "mode", "classifier", "accounting",
                "expect"},
               where);
    ScenarioEntry e;
    e.name = j.contains("name") ? get_as<std::string>(j, "name", where) : "entry" + std::to_string(index);

    const std::string protocol = j.contains("protocol") ? get_as<std::string>(j, "protocol", where) : "auto";
    if (protocol == "auto") {
        e.protocol = ProtocolChoice::Auto;
    } else if (protocol == "exact") {
        e.protocol = ProtocolChoice::Exact;
    } else if (protocol == "probabilistic") {
        e.protocol = ProtocolChoice::Probabilistic;
    } else if (protocol == "joint") {
        e.protocol = ProtocolChoice::Joint;
    } else {
        parse_fail(where, "protocol must be auto, exact, probabilistic or joint");
    }

    if (e.protocol == ProtocolChoice::Joint) {
        e.config.resource = j.contains("resource") ? parse_resource(j.at("resource"), where)
                                                   : DarkStateSpec{resource::Antisymmetric{3}};
        e.config.ensemble = j.contains("ensemble") ? parse_ensemble(j.at("ensemble"), where)
                                                   : EnsembleSpec::qutrit_equatorial();
    } else {
        if (!j.contains("resource") || !j.contains("ensemble")) {
            parse_fail(where, "resource and ensemble are required");
        }
        e.config.resource = parse_resource(j.at("resource"), where);
        e.config.ensemble = parse_ensemble(j.at("ensemble"), where);
    }
    e.config.parties = j.contains("parties") ? get_as<int>(j, "parties", where)
                       : e.protocol == ProtocolChoice::Joint ? 1
                                                             : resource_parties(e.config.resource);

    if (!j.contains("params")) {
        parse_fail(where, "missing key 'params'");
    }
    const auto &params = j.at("params");
    if (params.is_string()) {
        auto r = parse_random(params.get<std::string>(), where);
        if (!r) {
            parse_fail(where, "params string must be random:<count>:<seed>");
        }
        e.params = *r;
    } else if (params.is_object()) {
        std::map<std::string, double> named;
        for (const auto &[key, value] : params.items()) {
            if (!value.is_number()) {
                parse_fail(where, "parameter '" + key + "' must be a number");
            }
            named[key] = value.get<double>();
        }
        // Range and family checks belong to validation, which reports every entry at once.
        try {
            e.params = params_from_named(e.config.ensemble, named);
        } catch (const Error &err) {
            if (err.code() == ErrorCode::Parse) {
                throw;
            }
            throw ScenarioValidationError({{index, err.what()}});
        }
    } else {
        parse_fail(where, "params must be an object or a random:<count>:<seed> string");
    }

    if (j.contains("mode")) {
        const auto &mode = j.at("mode");
        if (mode.is_string() && mode.get<std::string>() == "enumerate") {
            e.config.mode = Enumerate{};
        } else if (mode.is_object() && mode.contains("sample")) {
            check_keys(mode, {"sample"}, where);
            const auto &s = mode.at("sample");
            check_keys(s, {"trials", "seed"}, where);
            e.config.mode = Sample{get_count(s, "trials", where), get_count(s, "seed", where)};
        } else {
            parse_fail(where, "mode must be \"enumerate\" or {\"sample\": {\"trials\": n, \"seed\": s}}");
        }
    }
    if (j.contains("classifier")) {
        const auto c = get_as<std::string>(j, "classifier", where);
        if (c == "Conservative") {
            e.config.classifier = Classifier::Conservative;
        } else if (c == "SeparabilityAware") {
            e.config.classifier = Classifier::SeparabilityAware;
        } else {
            parse_fail(where, "classifier must be Conservative or SeparabilityAware");
        }
    }
    if (j.contains("accounting")) {
        const auto a = get_as<std::string>(j, "accounting", where);
        if (a == "success_only") {
            e.config.accounting = MessageAccounting::SuccessOnly;
        } else if (a == "success_fail") {
            e.config.accounting = MessageAccounting::SuccessFail;
        } else if (a == "full_outcome") {
            e.config.accounting = MessageAccounting::FullOutcome;
        } else {
            parse_fail(where, "accounting must be success_only, success_fail or full_outcome");
        }
    }
    if (j.contains("expect")) {
        e.expect = parse_expectation(j.at("expect"), where);
    }
    return e;
}

std::string validate_entry(const ScenarioEntry &e) {
    try {
        if (e.protocol == ProtocolChoice::Joint) {
            if (!std::holds_alternative<resource::Antisymmetric>(e.config.resource) ||
                std::get<resource::Antisymmetric>(e.config.resource).d != 3 ||
                e.config.ensemble.family != Family::QutritEquatorial) {
                return "joint preparation runs on Antisymmetric(3) with the QutritEquatorial family";
            }
            if (std::holds_alternative<Sample>(e.config.mode)) {
                return "joint preparation does not support sampling";
            }
        } else {
            validate(e.config.resource);
            const auto kind = classify_combination(e.config);
            if (e.protocol == ProtocolChoice::Exact && kind != ProtocolKind::Exact) {
                return "combination is not an exact protocol";
            }
            if (e.protocol == ProtocolChoice::Probabilistic && kind != ProtocolKind::Probabilistic) {
                return "combination is not a probabilistic protocol";
            }
            if (const auto *s = std::get_if<Sample>(&e.config.mode); s && s->trials == 0) {
                return "sampling needs at least one trial";
            }
        }
        if (const auto *fixed = std::get_if<EnsembleParams>(&e.params)) {
            validate_params(e.config.ensemble, *fixed);
        } else if (std::get<RandomDraws>(e.params).count == 0) {
            return "random parameter draws need count >= 1";
        }
        if (e.expect) {
            if (e.expect->superposed_formula &&
                (!std::holds_alternative<resource::SuperposedFourQubit>(e.config.resource) ||
                 e.config.classifier != Classifier::Conservative)) {
                return "superposed_formula expectation needs a SuperposedFourQubit resource and Conservative";
            }
            if (e.expect->empirical_sigma && !std::holds_alternative<Sample>(e.config.mode)) {
                return "empirical_sigma expectation needs sample mode";
            }
            if (e.expect->empirical_sigma && !e.expect->success_probability && !e.expect->superposed_formula) {
                return "empirical_sigma expectation needs a target success probability";
            }
            if (!(e.expect->tolerance >= 0.0) || !(e.expect->ledger_tolerance >= 0.0)) {
                return "tolerances must be non-negative";
            }
        }
    } catch (const Error &err) {
        return err.what();
    }
    return {};
}

std::string format_issues(const std::vector<EntryIssue> &issues) {
    std::ostringstream out;
    out << issues.size() << " invalid scenario entr" << (issues.size() == 1 ? "y" : "ies");
    for (const auto &i : issues) {
        out << "\n  entry " << i.index << ": " << i.reason;
    }
    return out.str();
}

}  // namespace

ScenarioValidationError::ScenarioValidationError(std::vector<EntryIssue> issues)
    : Error(ErrorCode::Configuration, format_issues(issues)), issues_(std::move(issues)) {
}

const char *to_string(ProtocolChoice choice) {
    switch (choice) {
        case ProtocolChoice::Auto:
            return "auto";
        case ProtocolChoice::Exact:
            return "exact";
        case ProtocolChoice::Probabilistic:
            return "probabilistic";
        case ProtocolChoice::Joint:
            return "joint";
    }
    return "?";
}

ScenarioConfig parse_scenario_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        fail(ErrorCode::Parse, std::string("malformed scenario: ") + e.what());
    }
    if (!doc.is_object()) {
        fail(ErrorCode::Parse, "scenario must be a JSON object");
    }
    check_keys(doc, {"format", "scenario", "output", "entries"}, "scenario");
    if (get_as<std::string>(doc, "format", "scenario") != kScenarioFormatTag) {
        fail(ErrorCode::Parse, "unsupported scenario format tag (expected " + std::string(kScenarioFormatTag) + ")");
    }
    ScenarioConfig config;
    config.name = get_as<std::string>(doc, "scenario", "scenario");
    if (doc.contains("output")) {
        const auto &out = doc.at("output");
        check_keys(out, {"format", "path"}, "output");
        if (out.contains("format")) {
            config.output_format = get_as<std::string>(out, "format", "output");
        }
        if (out.contains("path")) {
            config.output_path = get_as<std::string>(out, "path", "output");
        }
        if (config.output_format != "json" && config.output_format != "csv" && config.output_format != "text") {
            fail(ErrorCode::Parse, "output format must be json, csv or text");
        }
    }
    const auto &entries = doc.contains("entries") ? doc.at("entries") : json();
    if (!entries.is_array() || entries.empty()) {
        fail(ErrorCode::Parse, "scenario needs a nonempty 'entries' array");
    }
    // Collect every entry's issue so a single run reports all of them.
    std::vector<EntryIssue> issues;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        try {
            config.entries.push_back(parse_entry(entries[i], i));
        } catch (const ScenarioValidationError &e) {
            issues.insert(issues.end(), e.issues().begin(), e.issues().end());
            config.entries.emplace_back();
        }
    }
    if (!issues.empty()) {
        throw ScenarioValidationError(std::move(issues));
    }
    validate_scenario(config);
    return config;
}

ScenarioConfig parse_scenario(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCode::Io, "cannot open scenario file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario_text(buf.str());
    } catch (const ScenarioValidationError &) {
        throw;
    } catch (const Error &e) {
        fail(e.code(), path.string() + ": " + e.what());
    }
}

void validate_scenario(const ScenarioConfig &config) {
    std::vector<EntryIssue> issues;
    for (std::size_t i = 0; i < config.entries.size(); ++i) {
        if (auto reason = validate_entry(config.entries[i]); !reason.empty()) {
            issues.push_back({i, std::move(reason)});
        }
    }
    if (!issues.empty()) {
        throw ScenarioValidationError(std::move(issues));
    }
}

void override_seed(ScenarioConfig &config, std::uint64_t seed) {
    for (std::size_t i = 0; i < config.entries.size(); ++i) {
        auto &e = config.entries[i];
        const std::uint64_t derived = derive_seed(seed, i);
        if (auto *s = std::get_if<Sample>(&e.config.mode)) {
            s->seed = derived;
        }
        if (auto *r = std::get_if<RandomDraws>(&e.params)) {
            r->seed = derived;
        }
    }
}

void override_trials(ScenarioConfig &config, std::uint64_t trials) {
    if (trials == 0) {
        fail(ErrorCode::InvalidArgument, "trial override must be >= 1");
    }
    for (auto &e : config.entries) {
        if (auto *s = std::get_if<Sample>(&e.config.mode)) {
            s->trials = trials;
        }
    }
}

std::vector<EnsembleParams> expand_params(const ScenarioEntry &entry) {
    if (const auto *fixed = std::get_if<EnsembleParams>(&entry.params)) {
        return {*fixed};
    }
    const auto &r = std::get<RandomDraws>(entry.params);
    Rng rng(r.seed);
    std::vector<EnsembleParams> out;
    out.reserve(r.count);
    for (std::uint64_t i = 0; i < r.count; ++i) {
        out.push_back(random_params(entry.config.ensemble, rng));
    }
    return out;
}

std::filesystem::path fixture_dir() {
    if (const char *env = std::getenv("DARKRSP_SCENARIO_DIR"); env && *env) {
        return env;
    }
    return DARKRSP_SCENARIO_DIR;
}

std::vector<std::string> list_fixtures() {
    std::vector<std::string> names;
    std::error_code ec;
    for (const auto &entry : std::filesystem::directory_iterator(fixture_dir(), ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".scn") {
            names.push_back(entry.path().stem().string());
        }
    }
    std::sort(names.begin(), names.end());
    return names;
}

std::filesystem::path resolve_scenario_path(const std::string &name_or_path) {
    const std::filesystem::path p(name_or_path);
    if (std::filesystem::exists(p)) {
        return p;
    }
    for (const auto &candidate : {fixture_dir() / name_or_path, fixture_dir() / (name_or_path + ".scn")}) {
        if (std::filesystem::exists(candidate)) {
            return candidate;
        }
    }
    return p;
}

}  // namespace darkrsp
