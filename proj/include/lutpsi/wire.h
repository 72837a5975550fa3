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

// Byte encodings of parameters, ciphertexts and keys.
//
// All integers are little-endian. A polynomial block is a header
//   N (u32) | Q (u64) | domain (u8) | count (u32)
// followed by `count` polynomials of N 8-byte words each. An RLWE ciphertext
// is one block with count 2 (a, then b). An LWE ciphertext is a block with
// N = dimension and count 1 holding the mask, then b as one more word.
// Composite types concatenate their parts behind a small fixed header.

#ifndef LUTPSI_WIRE_H_
#define LUTPSI_WIRE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lutpsi/bootstrap.h"
#include "lutpsi/ciphertext.h"
#include "lutpsi/params.h"
#include "lutpsi/psi.h"

namespace lutpsi {

class ByteWriter {
 public:
  void U8(uint8_t v) { out_.push_back(v); }
  void U32(uint32_t v);
  void U64(uint64_t v);
  void F64(double v);
  void Str(const std::string& s);
  void Bytes(std::span<const uint8_t> b);

  const std::vector<uint8_t>& data() const { return out_; }
  std::vector<uint8_t> Take() { return std::move(out_); }

 private:
  std::vector<uint8_t> out_;
};

// Reads throw kTruncated past the end of the input.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> in) : in_(in) {}

  uint8_t U8();
  uint32_t U32();
  uint64_t U64();
  double F64();
  std::string Str();
  std::span<const uint8_t> Bytes(size_t n);

  size_t remaining() const { return in_.size() - pos_; }
  // Throws kMalformedPayload if bytes are left over.
  void ExpectEnd() const;

 private:
  std::span<const uint8_t> in_;
  size_t pos_ = 0;
};

void WriteParams(ByteWriter& w, const ParameterSet& p);
ParameterSet ReadParams(ByteReader& r);

// `modulus` is written into the header; Read* stores the header modulus in
// *modulus when non-null.
void WritePolynomials(ByteWriter& w, std::span<const Polynomial> polys,
                      uint64_t modulus);
std::vector<Polynomial> ReadPolynomials(ByteReader& r,
                                        uint64_t* modulus = nullptr);

void WriteRlwe(ByteWriter& w, const RlweCiphertext& c, uint64_t modulus);
RlweCiphertext ReadRlwe(ByteReader& r, uint64_t* modulus = nullptr);

void WriteLwe(ByteWriter& w, const LweCiphertext& c);
LweCiphertext ReadLwe(ByteReader& r);

void WriteRgsw(ByteWriter& w, const RgswCiphertext& g, uint64_t modulus);
RgswCiphertext ReadRgsw(ByteReader& r, uint64_t* modulus = nullptr);

void WriteRlweKeySwitchKey(ByteWriter& w, const RlweKeySwitchKey& k,
                           uint64_t modulus);
RlweKeySwitchKey ReadRlweKeySwitchKey(ByteReader& r,
                                      uint64_t* modulus = nullptr);

void WriteLweKeySwitchKey(ByteWriter& w, const LweKeySwitchKey& k);
LweKeySwitchKey ReadLweKeySwitchKey(ByteReader& r);

void WriteBootstrapKey(ByteWriter& w, const BootstrapKey& bk,
                       uint64_t modulus);
BootstrapKey ReadBootstrapKey(ByteReader& r, uint64_t* modulus = nullptr);

void WriteSubstitutionKeys(ByteWriter& w, const SubstitutionKeySet& s,
                           uint64_t modulus);
SubstitutionKeySet ReadSubstitutionKeys(ByteReader& r,
                                        uint64_t* modulus = nullptr);

void WriteSenderKeyMaterial(ByteWriter& w, const SenderKeyMaterial& km,
                            uint64_t modulus);
SenderKeyMaterial ReadSenderKeyMaterial(ByteReader& r,
                                        uint64_t* modulus = nullptr);

void WritePsiQuery(ByteWriter& w, const PsiQuery& q, uint64_t modulus);
PsiQuery ReadPsiQuery(ByteReader& r, uint64_t* modulus = nullptr);

void WritePsiReply(ByteWriter& w, const PsiReply& reply);
PsiReply ReadPsiReply(ByteReader& r);

// Whole-buffer helpers; Deserialize* reject trailing bytes.
std::vector<uint8_t> SerializeRlwe(const RlweCiphertext& c, uint64_t modulus);
RlweCiphertext DeserializeRlwe(std::span<const uint8_t> bytes,
                               uint64_t* modulus = nullptr);
std::vector<uint8_t> SerializeLwe(const LweCiphertext& c);
LweCiphertext DeserializeLwe(std::span<const uint8_t> bytes);
std::vector<uint8_t> SerializeRgsw(const RgswCiphertext& g, uint64_t modulus);
RgswCiphertext DeserializeRgsw(std::span<const uint8_t> bytes,
                               uint64_t* modulus = nullptr);

}  // namespace lutpsi

#endif  // LUTPSI_WIRE_H_
