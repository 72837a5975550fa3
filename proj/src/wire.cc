/*
 * Copyright 2026 The lutpsi Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "lutpsi/wire.h"

#include <bit>
#include <string>

#include "lutpsi/error.h"

namespace lutpsi {

void ByteWriter::U32(uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
}

void ByteWriter::U64(uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
}

void ByteWriter::F64(double v) { U64(std::bit_cast<uint64_t>(v)); }

void ByteWriter::Str(const std::string& s) {
  U32(static_cast<uint32_t>(s.size()));
  out_.insert(out_.end(), s.begin(), s.end());
}

void ByteWriter::Bytes(std::span<const uint8_t> b) {
  out_.insert(out_.end(), b.begin(), b.end());
}

std::span<const uint8_t> ByteReader::Bytes(size_t n) {
  if (n > remaining()) {
    throw Error(ErrorCode::kTruncated,
                "need " + std::to_string(n) + " bytes, have " +
                    std::to_string(remaining()));
  }
  auto out = in_.subspan(pos_, n);
  pos_ += n;
  return out;
}

uint8_t ByteReader::U8() { return Bytes(1)[0]; }

uint32_t ByteReader::U32() {
  auto b = Bytes(4);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
  return v;
}

uint64_t ByteReader::U64() {
  auto b = Bytes(8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

double ByteReader::F64() { return std::bit_cast<double>(U64()); }

std::string ByteReader::Str() {
  const uint32_t n = U32();
  auto b = Bytes(n);
  return std::string(b.begin(), b.end());
}

void ByteReader::ExpectEnd() const {
  if (remaining() != 0) {
    throw Error(ErrorCode::kMalformedPayload,
                std::to_string(remaining()) + " trailing bytes");
  }
}

// ---- Parameters -------------------------------------------------------------

void WriteParams(ByteWriter& w, const ParameterSet& p) {
  w.Str(p.name);
  w.U64(p.lwe_dim);
  w.U64(p.lwe_modulus);
  w.U64(p.ring_dim);
  w.U64(p.ring_modulus);
  w.U64(p.plaintext_modulus);
  w.U64(p.lwe_ks_base);
  w.U64(p.gadget_base);
  w.U64(p.acc_base);
  w.F64(p.sigma);
  w.U64(p.rlwe_ks_base);
}

ParameterSet ReadParams(ByteReader& r) {
  ParameterSet p;
  p.name = r.Str();
  p.lwe_dim = r.U64();
  p.lwe_modulus = r.U64();
  p.ring_dim = r.U64();
  p.ring_modulus = r.U64();
  p.plaintext_modulus = r.U64();
  p.lwe_ks_base = r.U64();
  p.gadget_base = r.U64();
  p.acc_base = r.U64();
  p.sigma = r.F64();
  p.rlwe_ks_base = r.U64();
  return p;
}

// ---- Polynomial blocks ------------------------------------------------------

namespace {

struct BlockHeader {
  uint32_t n;
  uint64_t modulus;
  Domain domain;
  uint32_t count;
};

void WriteHeader(ByteWriter& w, const BlockHeader& h) {
  w.U32(h.n);
  w.U64(h.modulus);
  w.U8(static_cast<uint8_t>(h.domain));
  w.U32(h.count);
}

BlockHeader ReadHeader(ByteReader& r) {
  BlockHeader h;
  h.n = r.U32();
  h.modulus = r.U64();
  const uint8_t d = r.U8();
  if (d > 1) {
    throw Error(ErrorCode::kMalformedPayload,
                "bad domain tag " + std::to_string(d));
  }
  h.domain = static_cast<Domain>(d);
  h.count = r.U32();
  if (h.modulus < 2) {
    throw Error(ErrorCode::kMalformedPayload, "modulus below 2");
  }
  if (static_cast<uint64_t>(h.n) * h.count > r.remaining() / 8) {
    throw Error(ErrorCode::kTruncated, "polynomial block exceeds payload");
  }
  return h;
}

uint64_t ReadWord(ByteReader& r, uint64_t modulus) {
  const uint64_t v = r.U64();
  if (v >= modulus) {
    throw Error(ErrorCode::kMalformedPayload, "coefficient out of range");
  }
  return v;
}

void WritePrimeRows(ByteWriter& w, uint64_t base,
                    const std::vector<RlweCiphertext>& rows,
                    uint64_t modulus) {
  w.U64(base);
  w.U32(static_cast<uint32_t>(rows.size()));
  for (const RlweCiphertext& c : rows) WriteRlwe(w, c, modulus);
}

std::vector<RlweCiphertext> ReadPrimeRows(ByteReader& r, uint64_t* base,
                                          uint64_t* modulus) {
  *base = r.U64();
  const uint32_t count = r.U32();
  std::vector<RlweCiphertext> rows;
  for (uint32_t i = 0; i < count; ++i) rows.push_back(ReadRlwe(r, modulus));
  return rows;
}

}  // namespace

void WritePolynomials(ByteWriter& w, std::span<const Polynomial> polys,
                      uint64_t modulus) {
  if (polys.empty()) {
    throw Error(ErrorCode::kInvalidDimension, "empty polynomial block");
  }
  const size_t n = polys[0].size();
  for (const Polynomial& p : polys) {
    if (p.size() != n || p.domain != polys[0].domain) {
      throw Error(ErrorCode::kIncompatibleParams,
                  "polynomials in a block must share size and domain");
    }
  }
  WriteHeader(w, {static_cast<uint32_t>(n), modulus, polys[0].domain,
                  static_cast<uint32_t>(polys.size())});
  for (const Polynomial& p : polys) {
    for (uint64_t c : p.coeffs) w.U64(c);
  }
}

std::vector<Polynomial> ReadPolynomials(ByteReader& r, uint64_t* modulus) {
  const BlockHeader h = ReadHeader(r);
  std::vector<Polynomial> out;
  out.reserve(h.count);
  for (uint32_t i = 0; i < h.count; ++i) {
    Polynomial p(h.n, h.domain);
    for (uint64_t& c : p.coeffs) c = ReadWord(r, h.modulus);
    out.push_back(std::move(p));
  }
  if (modulus != nullptr) *modulus = h.modulus;
  return out;
}

void WriteRlwe(ByteWriter& w, const RlweCiphertext& c, uint64_t modulus) {
  const Polynomial polys[2] = {c.a, c.b};
  WritePolynomials(w, polys, modulus);
}

RlweCiphertext ReadRlwe(ByteReader& r, uint64_t* modulus) {
  std::vector<Polynomial> polys = ReadPolynomials(r, modulus);
  if (polys.size() != 2) {
    throw Error(ErrorCode::kMalformedPayload, "RLWE block needs 2 polynomials");
  }
  return RlweCiphertext{std::move(polys[0]), std::move(polys[1])};
}

void WriteLwe(ByteWriter& w, const LweCiphertext& c) {
  WriteHeader(w, {static_cast<uint32_t>(c.dim()), c.modulus,
                  Domain::kCoefficient, 1});
  for (uint64_t a : c.a) w.U64(a);
  w.U64(c.b);
}

LweCiphertext ReadLwe(ByteReader& r) {
  const BlockHeader h = ReadHeader(r);
  if (h.count != 1 || h.domain != Domain::kCoefficient) {
    throw Error(ErrorCode::kMalformedPayload, "bad LWE header");
  }
  LweCiphertext c;
  c.modulus = h.modulus;
  c.a.resize(h.n);
  for (uint64_t& a : c.a) a = ReadWord(r, h.modulus);
  c.b = ReadWord(r, h.modulus);
  return c;
}

void WriteRgsw(ByteWriter& w, const RgswCiphertext& g, uint64_t modulus) {
  WritePrimeRows(w, g.c0.base, g.c0.rows, modulus);
  WritePrimeRows(w, g.c1.base, g.c1.rows, modulus);
}

RgswCiphertext ReadRgsw(ByteReader& r, uint64_t* modulus) {
  RgswCiphertext g;
  g.c0.rows = ReadPrimeRows(r, &g.c0.base, modulus);
  g.c1.rows = ReadPrimeRows(r, &g.c1.base, modulus);
  return g;
}

void WriteRlweKeySwitchKey(ByteWriter& w, const RlweKeySwitchKey& k,
                           uint64_t modulus) {
  WritePrimeRows(w, k.base, k.rows, modulus);
}

RlweKeySwitchKey ReadRlweKeySwitchKey(ByteReader& r, uint64_t* modulus) {
  RlweKeySwitchKey k;
  k.rows = ReadPrimeRows(r, &k.base, modulus);
  return k;
}

void WriteLweKeySwitchKey(ByteWriter& w, const LweKeySwitchKey& k) {
  w.U64(k.from_dim);
  w.U64(k.to_dim);
  w.U64(k.base);
  w.U64(k.digits);
  w.U64(k.modulus);
  w.U64(k.data.size());
  for (uint64_t v : k.data) w.U64(v);
}

LweKeySwitchKey ReadLweKeySwitchKey(ByteReader& r) {
  LweKeySwitchKey k;
  k.from_dim = r.U64();
  k.to_dim = r.U64();
  k.base = r.U64();
  k.digits = r.U64();
  k.modulus = r.U64();
  const uint64_t size = r.U64();
  if (size > r.remaining() / 8) {
    throw Error(ErrorCode::kTruncated, "key-switch key exceeds payload");
  }
  if (size != k.from_dim * k.digits * (k.to_dim + 1) || k.modulus < 2) {
    throw Error(ErrorCode::kMalformedPayload, "inconsistent key-switch key");
  }
  k.data.resize(size);
  for (uint64_t& v : k.data) v = ReadWord(r, k.modulus);
  return k;
}

void WriteBootstrapKey(ByteWriter& w, const BootstrapKey& bk,
                       uint64_t modulus) {
  w.U64(bk.lwe_dim);
  w.U64(bk.digits);
  w.U64(bk.base);
  w.U32(static_cast<uint32_t>(bk.entries.size()));
  for (const RgswCiphertext& g : bk.entries) WriteRgsw(w, g, modulus);
}

BootstrapKey ReadBootstrapKey(ByteReader& r, uint64_t* modulus) {
  BootstrapKey bk;
  bk.lwe_dim = r.U64();
  bk.digits = r.U64();
  bk.base = r.U64();
  const uint32_t count = r.U32();
  if (count != bk.lwe_dim * bk.digits * bk.base) {
    throw Error(ErrorCode::kMalformedPayload, "bootstrap key entry count");
  }
  for (uint32_t i = 0; i < count; ++i) {
    bk.entries.push_back(ReadRgsw(r, modulus));
  }
  return bk;
}

void WriteSubstitutionKeys(ByteWriter& w, const SubstitutionKeySet& s,
                           uint64_t modulus) {
  w.U64(s.base);
  w.U32(static_cast<uint32_t>(s.keys.size()));
  for (const auto& [k, key] : s.keys) {
    w.U64(k);
    WriteRlweKeySwitchKey(w, key, modulus);
  }
}

SubstitutionKeySet ReadSubstitutionKeys(ByteReader& r, uint64_t* modulus) {
  SubstitutionKeySet s;
  s.base = r.U64();
  const uint32_t count = r.U32();
  for (uint32_t i = 0; i < count; ++i) {
    const uint64_t k = r.U64();
    s.keys.emplace(k, ReadRlweKeySwitchKey(r, modulus));
  }
  return s;
}

void WriteSenderKeyMaterial(ByteWriter& w, const SenderKeyMaterial& km,
                            uint64_t modulus) {
  WriteSubstitutionKeys(w, km.substitution, modulus);
  WriteRgsw(w, km.neg_z, modulus);
}

SenderKeyMaterial ReadSenderKeyMaterial(ByteReader& r, uint64_t* modulus) {
  SenderKeyMaterial km;
  km.substitution = ReadSubstitutionKeys(r, modulus);
  km.neg_z = ReadRgsw(r, modulus);
  return km;
}

void WritePsiQuery(ByteWriter& w, const PsiQuery& q, uint64_t modulus) {
  w.U64(q.index);
  w.U64(q.width);
  w.U64(q.digits);
  w.U64(q.bits);
  if (q.grid.size() != q.digits * q.bits) {
    throw Error(ErrorCode::kInvalidDimension, "query grid size");
  }
  for (const RlweCiphertext& c : q.grid) WriteRlwe(w, c, modulus);
}

PsiQuery ReadPsiQuery(ByteReader& r, uint64_t* modulus) {
  PsiQuery q;
  q.index = r.U64();
  q.width = r.U64();
  q.digits = r.U64();
  q.bits = r.U64();
  if (q.digits > 64 || q.bits > 64) {
    throw Error(ErrorCode::kMalformedPayload, "query grid too large");
  }
  for (uint64_t i = 0; i < q.digits * q.bits; ++i) {
    q.grid.push_back(ReadRlwe(r, modulus));
  }
  return q;
}

void WritePsiReply(ByteWriter& w, const PsiReply& reply) {
  w.U64(reply.index);
  w.U32(static_cast<uint32_t>(reply.results.size()));
  for (const LweCiphertext& c : reply.results) WriteLwe(w, c);
}

PsiReply ReadPsiReply(ByteReader& r) {
  PsiReply reply;
  reply.index = r.U64();
  const uint32_t count = r.U32();
  for (uint32_t i = 0; i < count; ++i) reply.results.push_back(ReadLwe(r));
  return reply;
}

std::vector<uint8_t> SerializeRlwe(const RlweCiphertext& c, uint64_t modulus) {
  ByteWriter w;
  WriteRlwe(w, c, modulus);
  return w.Take();
}

RlweCiphertext DeserializeRlwe(std::span<const uint8_t> bytes,
                               uint64_t* modulus) {
  ByteReader r(bytes);
  RlweCiphertext c = ReadRlwe(r, modulus);
  r.ExpectEnd();
  return c;
}

std::vector<uint8_t> SerializeLwe(const LweCiphertext& c) {
  ByteWriter w;
  WriteLwe(w, c);
  return w.Take();
}

LweCiphertext DeserializeLwe(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  LweCiphertext c = ReadLwe(r);
  r.ExpectEnd();
  return c;
}

std::vector<uint8_t> SerializeRgsw(const RgswCiphertext& g, uint64_t modulus) {
  ByteWriter w;
  WriteRgsw(w, g, modulus);
  return w.Take();
}

RgswCiphertext DeserializeRgsw(std::span<const uint8_t> bytes,
                               uint64_t* modulus) {
  ByteReader r(bytes);
  RgswCiphertext g = ReadRgsw(r, modulus);
  r.ExpectEnd();
  return g;
}

}  // namespace lutpsi
