/* Copyright 2026 The Augmentor Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "augmentor/error.hpp"

namespace augmentor {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::NonPositiveDepth: return "NonPositiveDepth";
    case ErrorCode::RayParallelToPlane: return "RayParallelToPlane";
    case ErrorCode::IntersectionBehindCamera: return "IntersectionBehindCamera";
    case ErrorCode::DegeneratePlane: return "DegeneratePlane";
    case ErrorCode::EmptyExtent: return "EmptyExtent";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptyMesh: return "EmptyMesh";
    case ErrorCode::OffPlanePose: return "OffPlanePose";
    case ErrorCode::BadAspect: return "BadAspect";
    case ErrorCode::NonUnitDirection: return "NonUnitDirection";
    case ErrorCode::MissingTrueMap: return "MissingTrueMap";
    case ErrorCode::EmptyPool: return "EmptyPool";
    case ErrorCode::EmptyTrajectorySet: return "EmptyTrajectorySet";
    case ErrorCode::EmptyRoadMask: return "EmptyRoadMask";
    case ErrorCode::DuplicateInstanceId: return "DuplicateInstanceId";
    case ErrorCode::NegativeStrength: return "NegativeStrength";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::MissingRealImage: return "MissingRealImage";
    case ErrorCode::MissingStrategyInput: return "MissingStrategyInput";
    case ErrorCode::CorruptManifest: return "CorruptManifest";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::RangeViolation: return "RangeViolation";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::size_t line)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      line_(line) {}

}  // namespace augmentor
