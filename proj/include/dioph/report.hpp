#pragma once

// JSON serialization of results. Key order is fixed, so equal inputs give equal bytes.

#include <json.hpp>

#include "dioph/catalog.hpp"
#include "dioph/selftest.hpp"
#include "dioph/transfer.hpp"
#include "dioph/witness.hpp"

namespace dioph {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const BigRational& q);
Json to_json(const Enclosure& e);
Json to_json(const ExtendedReal& x);
Json to_json(const ExtValue& x);
/// [[index tuple], coefficient] pairs, indices 0-based.
Json to_json(const IntegerMultivector& x);
Json to_json(const ZVector& z);

Json to_json(const ApproximationRecord& r);
Json to_json(const ExponentEstimate& e);
Json to_json(const ExponentVector& e);
Json to_json(const InequalityVerdict& v);
Json to_json(const ChainResult& c);
Json to_json(const Theorem1Parts& t);
Json to_json(const TransferWitness& w);
Json to_json(const MinimaProfile& p);
Json to_json(const MinkowskiCheck& c);
Json to_json(const MahlerInstance& m);
Json to_json(const ComparabilityReport& r);
Json to_json(const LawCount& l);
Json to_json(const AlgebraSelftest& a);
Json to_json(const MinimaSelftest& m);
Json to_json(const TruncationWitness& t);
Json to_json(const CatalogEntry& e);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

}  // namespace dioph
