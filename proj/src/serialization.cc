//
// Copyright 2026 The pview Authors
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
//

#include "pview/serialization.h"

#include <bit>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "pview/status_macros.h"

namespace pview {
namespace {

constexpr char kMagic[4] = {'H', 'D', 'P', 'V'};

class Writer {
 public:
  void Bytes(std::string_view b) { out_.append(b); }
  void U16(uint16_t v) {
    out_.push_back(static_cast<char>(v & 0xff));
    out_.push_back(static_cast<char>(v >> 8));
  }
  void U64(uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>(v >> (8 * i)));
  }
  void F64(double v) { U64(std::bit_cast<uint64_t>(v)); }
  void Varint(uint64_t v) {
    while (v >= 0x80) {
      out_.push_back(static_cast<char>((v & 0x7f) | 0x80));
      v >>= 7;
    }
    out_.push_back(static_cast<char>(v));
  }
  void String(std::string_view s) {
    Varint(s.size());
    Bytes(s);
  }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  size_t remaining() const { return in_.size() - pos_; }

  absl::StatusOr<std::string_view> Bytes(size_t n) {
    if (n > remaining()) return Truncated();
    std::string_view b = in_.substr(pos_, n);
    pos_ += n;
    return b;
  }
  absl::StatusOr<uint16_t> U16() {
    ASSIGN_OR_RETURN(std::string_view b, Bytes(2));
    return static_cast<uint16_t>(static_cast<uint8_t>(b[0]) |
                                 (static_cast<uint8_t>(b[1]) << 8));
  }
  absl::StatusOr<uint64_t> U64() {
    ASSIGN_OR_RETURN(std::string_view b, Bytes(8));
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<uint64_t>(static_cast<uint8_t>(b[i])) << (8 * i);
    }
    return v;
  }
  absl::StatusOr<double> F64() {
    ASSIGN_OR_RETURN(uint64_t bits, U64());
    return std::bit_cast<double>(bits);
  }
  absl::StatusOr<uint64_t> Varint() {
    uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      if (remaining() == 0) return Truncated();
      const auto byte = static_cast<uint8_t>(in_[pos_++]);
      v |= static_cast<uint64_t>(byte & 0x7f) << shift;
      if ((byte & 0x80) == 0) return v;
    }
    return absl::DataLossError("varint longer than 10 bytes");
  }
  absl::StatusOr<std::string_view> String() {
    ASSIGN_OR_RETURN(uint64_t n, Varint());
    return Bytes(n);
  }

 private:
  static absl::Status Truncated() {
    return absl::DataLossError("view file is truncated");
  }

  std::string_view in_;
  size_t pos_ = 0;
};

absl::StatusOr<nlohmann::json> ParseJson(std::string_view text,
                                         std::string_view what) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    return absl::DataLossError(absl::StrCat(std::string(what), " is not valid JSON"));
  }
  return j;
}

absl::Status AsDataLoss(const absl::Status& status) {
  if (status.ok()) return status;
  return absl::DataLossError(status.message());
}

}  // namespace

std::string SerializeView(const PView& view) {
  Writer w;
  w.Bytes(std::string_view(kMagic, 4));
  w.U16(kViewFormatVersion);
  const std::string schema_json = view.schema.CanonicalJson();
  w.String(schema_json);
  w.U64(Fnv1a64(schema_json));
  const Hyperparams& hp = view.hyperparams;
  for (double v : {hp.epsilon_b, hp.ratio, hp.alpha, hp.beta, hp.gamma}) {
    w.F64(v);
  }
  const MechanismParams& p = view.params;
  for (double v : {p.epsilon_b, p.epsilon_r, p.epsilon_p, p.theta, p.kappa,
                   p.epsilon_cut, p.lambda, p.delta, p.converge_budget,
                   p.cut_budget}) {
    w.F64(v);
  }
  w.String(view.meta.ToJson().dump());
  w.Varint(view.blocks.size());
  for (const auto& block : view.blocks) {
    for (const auto& r : block.ranges) {
      w.Varint(r.lo);
      w.Varint(r.hi);
    }
    w.F64(block.noisy_sum);
    w.Varint(block.depth);
  }
  return w.Take();
}

absl::StatusOr<PView> DeserializeView(std::string_view bytes) {
  Reader r(bytes);
  auto magic = r.Bytes(4);
  if (!magic.ok() || *magic != std::string_view(kMagic, 4)) {
    return absl::DataLossError("not a view file (bad magic)");
  }
  ASSIGN_OR_RETURN(uint16_t version, r.U16());
  if (version != kViewFormatVersion) {
    return absl::UnimplementedError(absl::StrCat(
        "view format version ", version, " is not supported (expected ",
        kViewFormatVersion, ")"));
  }
  ASSIGN_OR_RETURN(std::string_view schema_text, r.String());
  ASSIGN_OR_RETURN(uint64_t schema_hash, r.U64());
  if (schema_hash != Fnv1a64(schema_text)) {
    return absl::FailedPreconditionError("schema hash mismatch");
  }
  ASSIGN_OR_RETURN(nlohmann::json schema_json, ParseJson(schema_text, "schema"));
  PView view;
  {
    auto schema = Schema::FromJson(schema_json);
    if (!schema.ok()) return AsDataLoss(schema.status());
    view.schema = *std::move(schema);
    if (auto s = view.schema.Validate(); !s.ok()) return AsDataLoss(s);
  }
  Hyperparams& hp = view.hyperparams;
  for (double* v : {&hp.epsilon_b, &hp.ratio, &hp.alpha, &hp.beta, &hp.gamma}) {
    ASSIGN_OR_RETURN(*v, r.F64());
  }
  MechanismParams& p = view.params;
  for (double* v : {&p.epsilon_b, &p.epsilon_r, &p.epsilon_p, &p.theta,
                    &p.kappa, &p.epsilon_cut, &p.lambda, &p.delta,
                    &p.converge_budget, &p.cut_budget}) {
    ASSIGN_OR_RETURN(*v, r.F64());
  }
  ASSIGN_OR_RETURN(std::string_view meta_text, r.String());
  ASSIGN_OR_RETURN(nlohmann::json meta_json, ParseJson(meta_text, "metadata"));
  try {
    view.meta = BuildMeta::FromJson(meta_json);
  } catch (const nlohmann::json::exception& e) {
    return absl::DataLossError(absl::StrCat("bad metadata: ", e.what()));
  }

  const size_t d = view.schema.dims();
  ASSIGN_OR_RETURN(uint64_t m, r.Varint());
  // Each record takes at least 2d + 9 bytes.
  if (m > r.remaining() / (2 * d + 9)) {
    return absl::DataLossError(absl::StrCat(
        "block count ", m, " does not fit in ", r.remaining(), " bytes"));
  }
  view.blocks.resize(m);
  for (auto& block : view.blocks) {
    block.ranges.resize(d);
    for (auto& range : block.ranges) {
      ASSIGN_OR_RETURN(uint64_t lo, r.Varint());
      ASSIGN_OR_RETURN(uint64_t hi, r.Varint());
      if (lo > UINT32_MAX || hi > UINT32_MAX) {
        return absl::DataLossError("range endpoint overflows 32 bits");
      }
      range = {static_cast<uint32_t>(lo), static_cast<uint32_t>(hi)};
    }
    ASSIGN_OR_RETURN(block.noisy_sum, r.F64());
    ASSIGN_OR_RETURN(uint64_t depth, r.Varint());
    if (depth > UINT32_MAX) return absl::DataLossError("depth overflows");
    block.depth = static_cast<uint32_t>(depth);
  }
  if (r.remaining() != 0) {
    return absl::DataLossError(
        absl::StrCat(r.remaining(), " trailing bytes after the last block"));
  }
  if (auto s = view.Validate(); !s.ok()) return AsDataLoss(s);
  return view;
}

std::optional<ViewFormatError> FormatErrorKind(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kUnimplemented:
      return ViewFormatError::kVersionMismatch;
    case absl::StatusCode::kFailedPrecondition:
      return ViewFormatError::kSchemaHashMismatch;
    case absl::StatusCode::kDataLoss:
      return ViewFormatError::kMalformed;
    default:
      return std::nullopt;
  }
}

nlohmann::json ViewToJson(const PView& view) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : view.blocks) {
    nlohmann::json ranges = nlohmann::json::array();
    for (const auto& r : b.ranges) ranges.push_back({r.lo, r.hi});
    blocks.push_back(
        {{"ranges", std::move(ranges)}, {"noisy_sum", b.noisy_sum},
         {"depth", b.depth}});
  }
  const Hyperparams& hp = view.hyperparams;
  return {{"version", kViewFormatVersion},
          {"schema", view.schema.ToJson()},
          {"params", view.params.ToJson()},
          {"hyperparams",
           {{"epsilon_b", hp.epsilon_b},
            {"ratio", hp.ratio},
            {"alpha", hp.alpha},
            {"beta", hp.beta},
            {"gamma", hp.gamma}}},
          {"meta", view.meta.ToJson()},
          {"blocks", std::move(blocks)}};
}

absl::StatusOr<PView> ViewFromJson(const nlohmann::json& j) {
  try {
    if (j.at("version").get<int>() != kViewFormatVersion) {
      return absl::UnimplementedError("unsupported view JSON version");
    }
    PView view;
    ASSIGN_OR_RETURN(view.schema, Schema::FromJson(j.at("schema")));
    ASSIGN_OR_RETURN(view.params, MechanismParams::FromJson(j.at("params")));
    if (j.contains("hyperparams")) {
      const auto& h = j["hyperparams"];
      view.hyperparams = {h.at("epsilon_b").get<double>(),
                          h.at("ratio").get<double>(),
                          h.at("alpha").get<double>(),
                          h.at("beta").get<double>(),
                          h.at("gamma").get<double>()};
    }
    if (j.contains("meta")) view.meta = BuildMeta::FromJson(j["meta"]);
    for (const auto& b : j.at("blocks")) {
      ViewBlock block;
      for (const auto& r : b.at("ranges")) {
        block.ranges.push_back({r.at(0).get<uint32_t>(), r.at(1).get<uint32_t>()});
      }
      block.noisy_sum = b.at("noisy_sum").get<double>();
      block.depth = b.value("depth", 0u);
      view.blocks.push_back(std::move(block));
    }
    if (auto s = view.Validate(); !s.ok()) return AsDataLoss(s);
    return view;
  } catch (const nlohmann::json::exception& e) {
    return absl::DataLossError(absl::StrCat("bad view JSON: ", e.what()));
  }
}

absl::Status WriteViewFile(const std::string& path, const PView& view) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  const std::string bytes = SerializeView(view);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) return absl::InternalError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<PView> ReadViewFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return DeserializeView(buffer.str());
}

}  // namespace pview
