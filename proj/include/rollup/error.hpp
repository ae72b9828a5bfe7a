// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace rollup {

enum class Errc {
    BodyTooLarge,
    InsufficientQuorum,
    InvalidSignature,
    InsufficientChunks,
    SampleCountTooLarge,
    NoDivergence,
    NoProverAvailable,
    WindowClosed,
    RejectedProof,
    UnbondedSubmitter,
    DoubleWithdrawal,
    ProofMismatch,
    BadConfig,
    BadScript,
    GameProtocol,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
    {
    }

    Errc code() const { return code_; }

private:
    Errc code_;
};

} // namespace rollup
