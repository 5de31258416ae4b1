#pragma once

// JSON mappings for the report types. Field names follow the struct members.

#include "json.hpp"

#include "iomma/algorithms.hpp"
#include "iomma/bounds.hpp"
#include "iomma/core.hpp"
#include "iomma/goto_model.hpp"
#include "iomma/phases.hpp"
#include "iomma/tiny_search.hpp"

namespace iomma {

using Json = nlohmann::ordered_json;

void to_json(Json& j, const ProblemDims& d);
void from_json(const Json& j, ProblemDims& d);

void to_json(Json& j, const IOStats& s);
void from_json(const Json& j, IOStats& s);

void to_json(Json& j, const PredictedIO& p);
void from_json(const Json& j, PredictedIO& p);

void to_json(Json& j, const BoundReport& r);
void from_json(const Json& j, BoundReport& r);

void to_json(Json& j, const GotoParams& p);
void from_json(const Json& j, GotoParams& p);

void to_json(Json& j, const GotoReport& r);
void from_json(const Json& j, GotoReport& r);

void to_json(Json& j, const PhaseReport& r);
void from_json(const Json& j, PhaseReport& r);

} // namespace iomma
