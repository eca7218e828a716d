#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "haggle/experiment.hpp"
#include "haggle/preference.hpp"
#include "haggle/session.hpp"

namespace haggle {

/// Distribution round-trip: {n, mu[], sigma[][], corr[][], seed}.
nlohmann::json distributionToJson(const PreferenceDistribution& dist);
PreferenceDistribution distributionFromJson(const nlohmann::json& j);

std::string actorName(Actor a);
std::string eventKindName(EventKind k);

/// One JSON object per event: {round, actor, bundle, price, event} plus
/// score / class fields where applicable. price is null for terminal events.
nlohmann::json eventToJson(const Event& e);

/// JSON-lines transcript, one event per line.
void writeTranscript(const NegotiationOutcome& outcome, std::ostream& os);

/// Experiment configuration file (all fields optional, defaults apply).
ExperimentConfig configFromJson(const nlohmann::json& j);
ExperimentConfig loadConfigFile(const std::string& path);

}  // namespace haggle
