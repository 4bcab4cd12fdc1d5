// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "mplite/common/base64.hpp"
#include "mplite/common/error.hpp"
#include "mplite/common/files.hpp"
#include "mplite/common/hash.hpp"
#include "test_support.hpp"

namespace mplite {
namespace {

std::vector<unsigned char> bytes(std::string_view s) { return {s.begin(), s.end()}; }

TEST(Base64, Rfc4648Vectors) {
  EXPECT_EQ(base64_encode(bytes("")), "");
  EXPECT_EQ(base64_encode(bytes("f")), "Zg==");
  EXPECT_EQ(base64_encode(bytes("fo")), "Zm8=");
  EXPECT_EQ(base64_encode(bytes("foo")), "Zm9v");
  EXPECT_EQ(base64_encode(bytes("foob")), "Zm9vYg==");
  EXPECT_EQ(base64_encode(bytes("fooba")), "Zm9vYmE=");
  EXPECT_EQ(base64_encode(bytes("foobar")), "Zm9vYmFy");
  EXPECT_EQ(base64_decode("Zm9vYmFy"), bytes("foobar"));
  EXPECT_EQ(base64_decode("Zm9vYg=="), bytes("foob"));
}

TEST(Base64, RejectsMalformedInput) {
  EXPECT_THROW(base64_decode("Zm9v!mFy"), DataError);
  EXPECT_THROW(base64_decode("Zm9"), DataError);
}

TEST(Base64, DoublesRoundTripBitwise) {
  const std::vector<double> values{0.0, -0.0, 1.0, -3.5e-300, 6.02214076e23,
                                   std::numeric_limits<double>::denorm_min(), std::numeric_limits<double>::max()};
  const auto back = decode_doubles(encode_doubles(values));
  ASSERT_EQ(back.size(), values.size());
  EXPECT_EQ(std::memcmp(back.data(), values.data(), values.size() * sizeof(double)), 0);
}

TEST(Base64, DoublesAreLittleEndian) {
  // 1.0 is 0x3FF0000000000000; little-endian bytes end in F0 3F.
  const auto raw = base64_decode(encode_doubles(std::vector<double>{1.0}));
  ASSERT_EQ(raw.size(), 8u);
  EXPECT_EQ(raw[6], 0xF0);
  EXPECT_EQ(raw[7], 0x3F);
}

TEST(Hash, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Files, AtomicWriteThenRead) {
  testing::TempDir dir;
  const auto path = dir.path() / "nested" / "file.txt";
  write_file_atomic(path, "hello\n");
  EXPECT_EQ(read_file(path), "hello\n");
  write_file_atomic(path, "again");
  EXPECT_EQ(read_file(path), "again");
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  EXPECT_EQ(sha256_file(path), sha256_hex("again"));
}

TEST(Files, MissingFileIsValidationError) {
  testing::TempDir dir;
  EXPECT_THROW(read_file(dir.path() / "absent"), ValidationError);
}

TEST(Files, UnwritableLocationIsRuntimeError) {
  testing::TempDir dir;
  write_file_atomic(dir.path() / "plain", "x");
  try {
    write_file_atomic(dir.path() / "plain" / "child.txt", "y");
    FAIL() << "expected an error";
  } catch (const ValidationError&) {
    FAIL() << "I/O failure must not be classified as a validation error";
  } catch (const Error&) {
  }
}

}  // namespace
}  // namespace mplite
