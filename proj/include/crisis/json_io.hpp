#pragma once

#include "json.hpp"

#include "crisis/augment.hpp"
#include "crisis/encoder.hpp"
#include "crisis/mtl.hpp"

namespace crisis {

void to_json(nlohmann::json& j, const EncoderConfig& config);
void from_json(const nlohmann::json& j, EncoderConfig& config);

void to_json(nlohmann::json& j, const NLASchedule& schedule);
void from_json(const nlohmann::json& j, NLASchedule& schedule);

void to_json(nlohmann::json& j, const TrainConfig& config);
void from_json(const nlohmann::json& j, TrainConfig& config);

void to_json(nlohmann::json& j, const TrainLogEntry& entry);
void from_json(const nlohmann::json& j, TrainLogEntry& entry);

}  // namespace crisis
