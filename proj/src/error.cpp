#include "splforge/error.hpp"

namespace splforge {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::InvalidPath: return "InvalidPath";
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::DuplicateProductName: return "DuplicateProductName";
        case ErrorCode::InternalCollision: return "InternalCollision";
        case ErrorCode::EmptyContext: return "EmptyContext";
        case ErrorCode::InvalidContext: return "InvalidContext";
        case ErrorCode::EmptyRepository: return "EmptyRepository";
        case ErrorCode::UnknownGroup: return "UnknownGroup";
        case ErrorCode::UnknownFeature: return "UnknownFeature";
        case ErrorCode::UnknownArtefactId: return "UnknownArtefactId";
        case ErrorCode::OrphanSelection: return "OrphanSelection";
        case ErrorCode::MalformedAnnotation: return "MalformedAnnotation";
        case ErrorCode::EmptyProduct: return "EmptyProduct";
        case ErrorCode::CompositionError: return "CompositionError";
        case ErrorCode::RepositoryError: return "RepositoryError";
    }
    return "Error";
}

} // namespace splforge
