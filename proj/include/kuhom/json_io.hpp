#ifndef KUHOM_JSON_IO_HPP
#define KUHOM_JSON_IO_HPP

#include <kuhom/slice.hpp>

#include <json.hpp>

namespace kuhom {

using Json = nlohmann::ordered_json;

// {"num":"...","den":"..."} with decimal strings.
Json scalar_to_json(const LocalScalar& s);
LocalScalar scalar_from_json(const Json& j);

// [{"v":0,"num":"4","den":"1"}, ...] sorted by v.
Json poly_to_json(const KuPoly& p);
KuPoly poly_from_json(const Json& j);

// {"p":2,"n":2,"convention":"unsigned","coeffs":[...]}
Json series_to_json(const PSeries& s);

// {"terms":[{"i":1,"j":1,"poly":[...]}]} sorted by (i, j, v).
Json element_to_json(const TensorElement& e);
TensorElement element_from_json(const Json& j);

// {"boundary":[{"m":..,"i":..,"j":..,"num":..,"den":..}],"relations":[...],
//  "custom":[{"column":{...},"num":..,"den":..}]}
Json certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const Json& j);

}  // namespace kuhom

#endif
