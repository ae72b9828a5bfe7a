// SPDX-License-Identifier: Apache-2.0
#include "rollup/error.hpp"

namespace rollup {

const char* errc_name(Errc c)
{
    switch (c) {
    case Errc::BodyTooLarge: return "BodyTooLarge";
    case Errc::InsufficientQuorum: return "InsufficientQuorum";
    case Errc::InvalidSignature: return "InvalidSignature";
    case Errc::InsufficientChunks: return "InsufficientChunks";
    case Errc::SampleCountTooLarge: return "SampleCountTooLarge";
    case Errc::NoDivergence: return "NoDivergence";
    case Errc::NoProverAvailable: return "NoProverAvailable";
    case Errc::WindowClosed: return "WindowClosed";
    case Errc::RejectedProof: return "RejectedProof";
    case Errc::UnbondedSubmitter: return "UnbondedSubmitter";
    case Errc::DoubleWithdrawal: return "DoubleWithdrawal";
    case Errc::ProofMismatch: return "ProofMismatch";
    case Errc::BadConfig: return "BadConfig";
    case Errc::BadScript: return "BadScript";
    case Errc::GameProtocol: return "GameProtocol";
    }
    return "UnknownError";
}

} // namespace rollup
