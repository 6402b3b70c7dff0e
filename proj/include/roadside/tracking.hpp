/**
 * @file tracking.hpp
 * @brief Centralized cluster fusion and a linear constant-velocity Kalman
 *        multi-object tracker with M-of-N confirmation and coasting.
 */
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "roadside/common.hpp"
#include "roadside/perception.hpp"

namespace roadside::tracking {

using perception::Detection;

using StateVector = Eigen::Vector4d;      ///< (x, y, vx, vy)
using StateCovariance = Eigen::Matrix4d;
using Measurement = Eigen::Vector2d;
using MeasurementCovariance = Eigen::Matrix2d;

/// Chi-square 99% quantile, 2 degrees of freedom.
inline constexpr double kDefaultGate = 9.21;

struct TrackerParams {
  double linkage{1.8};      ///< single-linkage distance, one car width
  int confirm_hits{2};      ///< M of ...
  int confirm_window{3};    ///< ... N
  int coast_limit{5};       ///< deleted at this many consecutive misses
  double accel_sigma{1.0};  ///< white-acceleration process noise, m/s^2
  double gate{kDefaultGate};
  double init_speed_sigma{20.0};  ///< prior on the unknown initial velocity, m/s
  bool strict_id_credit{false};   ///< credit only the member nearest to the track
};

struct Cluster {
  Measurement centroid{Measurement::Zero()};
  MeasurementCovariance noise{MeasurementCovariance::Identity()};
  std::vector<std::size_t> members;   ///< indices into the detection list
  std::vector<VehicleId> source_ids;  ///< ascending union
};

/// Single-linkage connected components at distance <= linkage; centroid is the
/// member mean and its noise the mean member covariance divided by the member count.
std::vector<Cluster> cluster(std::span<const Detection> detections, double linkage);

enum class TrackStatus { Tentative, Confirmed };

struct Track {
  int track_id{0};
  StateVector state{StateVector::Zero()};
  StateCovariance covariance{StateCovariance::Zero()};
  TrackStatus status{TrackStatus::Tentative};
  int misses_in_row{0};
  std::uint32_t hit_history{0};  ///< bit 0 = latest scan
  int scans{0};                  ///< scans since creation, creation included
  std::vector<VehicleId> last_ids;

  Measurement position() const { return state.head<2>(); }
  bool confirmed() const { return status == TrackStatus::Confirmed; }
  int hits_in_last(int window) const;
};

/// Constant-velocity transition and white-acceleration noise for step dt.
StateCovariance process_noise(double dt, double accel_sigma);
Track predict(Track track, double dt, double accel_sigma);

/// Squared Mahalanobis distance of a cluster from a track's predicted position.
double mahalanobis2(const Track& track, const Cluster& cluster);

struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  ///< (track, cluster)
  std::vector<double> distances;                           ///< squared Mahalanobis, per pair
  std::vector<std::size_t> unassigned_tracks;
  std::vector<std::size_t> unassigned_clusters;
};

/// Optimal one-to-one assignment minimizing the summed squared Mahalanobis
/// distance, restricted to pairs inside the gate.
Assignment associate(std::span<const Track> tracks, std::span<const Cluster> clusters,
                     double gate = kDefaultGate);

/// Measurement update of one track; covariance via the Joseph form.
void kalman_update(Track& track, const Cluster& cluster);

/**
 * @brief Applies an assignment: updates assigned tracks, coasts the rest,
 *        confirms by M-of-N, deletes stale tracks and seeds new tentative
 *        tracks from unassigned clusters.
 */
void update_and_manage(std::vector<Track>& tracks, std::span<const Cluster> clusters,
                       std::span<const Detection> detections, const Assignment& assignment,
                       const TrackerParams& params, int& next_track_id);

/// Union (ascending) of last_ids over confirmed tracks, coasting ones included.
std::vector<VehicleId> tracked_ids(std::span<const Track> tracks);

class MultiObjectTracker {
 public:
  explicit MultiObjectTracker(TrackerParams params = {}) : params_(params) {}

  /// Predict by dt, cluster the scan, associate, update and manage.
  void step(std::span<const Detection> detections, double dt);

  const std::vector<Track>& tracks() const { return tracks_; }
  std::vector<VehicleId> tracked_ids() const { return tracking::tracked_ids(tracks_); }
  const TrackerParams& params() const { return params_; }

 private:
  TrackerParams params_;
  std::vector<Track> tracks_;
  int next_track_id_{1};
};

}  // namespace roadside::tracking
