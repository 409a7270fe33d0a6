#pragma once

#include "halo/bounds.hpp"
#include "halo/geometry.hpp"
#include "halo/newton.hpp"
#include "halo/up.hpp"
#include "halo/weight.hpp"

#include <json.hpp>

#include <string>

namespace halo {

using OJson = nlohmann::ordered_json;

OJson rat_json(const Rat& x);          // "num/den"
OJson val_json(const Valuation& v);    // "num/den" or "inf"
Rat parse_rat(const std::string& s);   // "num/den" or "num"

OJson polygon_json(const NewtonPolygon& np);
OJson weight_json(const WeightCharacter& w);
WeightCharacter parse_weight(const OJson& j);
OJson global_data_json(const GlobalData& g);
GlobalData parse_global_data(const OJson& j);
OJson bound_points_json(const std::vector<BoundPoint>& pts);
OJson certificate_json(const DisconnectCertificate& c);
OJson char_series_json(const CharSeries& cs, bool allow_floors);

}  // namespace halo
