#include "roadside/tracking.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>

#include "roadside/assignment.hpp"

namespace roadside::tracking {

namespace {

// Keeps S invertible when member covariances are zero (noise switched off).
constexpr double kNoiseFloor = 1e-6;

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

  std::size_t find(std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;
  }

  std::vector<std::size_t> parent;
};

Eigen::Matrix<double, 2, 4> observation() {
  Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  return h;
}

MeasurementCovariance innovation_covariance(const Track& track, const Cluster& c) {
  MeasurementCovariance s = track.covariance.topLeftCorner<2, 2>() + c.noise;
  return 0.5 * (s + s.transpose());
}

std::vector<VehicleId> credited_ids(const Track& track, const Cluster& c,
                                    std::span<const Detection> detections, bool strict) {
  if (!strict) return c.source_ids;
  const Detection* nearest = nullptr;
  double best = std::numeric_limits<double>::infinity();
  for (auto m : c.members) {
    const auto& d = detections[m];
    const double dist =
        std::hypot(d.position.x - track.state(0), d.position.y - track.state(1));
    if (dist < best) {
      best = dist;
      nearest = &d;
    }
  }
  if (nearest == nullptr || nearest->is_false_alarm || nearest->primary_id == 0) return {};
  return {nearest->primary_id};
}

Track spawn_track(const Cluster& c, const TrackerParams& params, int id) {
  Track t;
  t.track_id = id;
  t.state << c.centroid(0), c.centroid(1), 0.0, 0.0;
  t.covariance.setZero();
  t.covariance.topLeftCorner<2, 2>() = c.noise;
  const double v2 = params.init_speed_sigma * params.init_speed_sigma;
  t.covariance(2, 2) = v2;
  t.covariance(3, 3) = v2;
  t.hit_history = 1u;
  t.scans = 1;
  t.status = params.confirm_hits <= 1 ? TrackStatus::Confirmed : TrackStatus::Tentative;
  t.last_ids = c.source_ids;
  return t;
}

}  // namespace

int Track::hits_in_last(int window) const {
  if (window <= 0) return 0;
  const std::uint32_t mask = window >= 32 ? ~0u : ((1u << window) - 1u);
  return std::popcount(hit_history & mask);
}

std::vector<Cluster> cluster(std::span<const Detection> detections, double linkage) {
  const std::size_t n = detections.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detections[a].position.x < detections[b].position.x;
  });

  DisjointSets sets(n);
  const double link2 = linkage * linkage;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = detections[order[i]].position;
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec2 q = detections[order[j]].position;
      if (q.x - p.x > linkage) break;
      const double dx = q.x - p.x;
      const double dy = q.y - p.y;
      if (dx * dx + dy * dy <= link2) sets.unite(order[i], order[j]);
    }
  }

  // Roots are the smallest member index, so clusters come out in detection order.
  std::vector<Cluster> out;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = sets.find(i);
    if (slot[root] == n) {
      slot[root] = out.size();
      out.emplace_back();
    }
    out[slot[root]].members.push_back(i);
  }

  for (auto& c : out) {
    const double m = static_cast<double>(c.members.size());
    Measurement sum = Measurement::Zero();
    MeasurementCovariance cov = MeasurementCovariance::Zero();
    for (auto i : c.members) {
      const auto& d = detections[i];
      sum += Measurement(d.position.x, d.position.y);
      cov(0, 0) += d.covariance[0];
      cov(0, 1) += d.covariance[1];
      cov(1, 0) += d.covariance[1];
      cov(1, 1) += d.covariance[2];
      c.source_ids.insert(c.source_ids.end(), d.source_ids.begin(), d.source_ids.end());
    }
    c.centroid = sum / m;
    c.noise = cov / (m * m);
    c.noise(0, 0) = std::max(c.noise(0, 0), kNoiseFloor);
    c.noise(1, 1) = std::max(c.noise(1, 1), kNoiseFloor);
    std::sort(c.source_ids.begin(), c.source_ids.end());
    c.source_ids.erase(std::unique(c.source_ids.begin(), c.source_ids.end()),
                       c.source_ids.end());
  }
  return out;
}

StateCovariance process_noise(double dt, double accel_sigma) {
  const double q = accel_sigma * accel_sigma;
  const double dt2 = dt * dt;
  const double a = 0.25 * dt2 * dt2 * q;
  const double b = 0.5 * dt2 * dt * q;
  const double c = dt2 * q;
  StateCovariance out = StateCovariance::Zero();
  out(0, 0) = a;
  out(1, 1) = a;
  out(0, 2) = out(2, 0) = b;
  out(1, 3) = out(3, 1) = b;
  out(2, 2) = c;
  out(3, 3) = c;
  return out;
}

Track predict(Track track, double dt, double accel_sigma) {
  StateCovariance f = StateCovariance::Identity();
  f(0, 2) = dt;
  f(1, 3) = dt;
  track.state = f * track.state;
  StateCovariance p = f * track.covariance * f.transpose() + process_noise(dt, accel_sigma);
  track.covariance = 0.5 * (p + p.transpose());
  return track;
}

double mahalanobis2(const Track& track, const Cluster& cluster) {
  const Measurement nu = cluster.centroid - track.position();
  const MeasurementCovariance s = innovation_covariance(track, cluster);
  return nu.dot(s.ldlt().solve(nu));
}

Assignment associate(std::span<const Track> tracks, std::span<const Cluster> clusters,
                     double gate) {
  Assignment out;
  const auto nt = tracks.size();
  const auto nc = clusters.size();
  Eigen::MatrixXd d2(nt, nc);
  double worst = 0.0;
  for (std::size_t i = 0; i < nt; ++i) {
    for (std::size_t j = 0; j < nc; ++j) {
      d2(i, j) = mahalanobis2(tracks[i], clusters[j]);
      if (d2(i, j) <= gate) worst = std::max(worst, d2(i, j));
    }
  }

  // Out-of-gate pairs get a cost larger than any full set of in-gate pairs,
  // so the solver maximizes the number of gated matches first.
  const double forbidden = (worst + 1.0) * static_cast<double>(std::max(nt, nc) + 1);
  Eigen::MatrixXd cost = d2;
  for (Eigen::Index i = 0; i < cost.rows(); ++i) {
    for (Eigen::Index j = 0; j < cost.cols(); ++j) {
      if (!(d2(i, j) <= gate)) cost(i, j) = forbidden;
    }
  }

  const auto row_to_col = solve_assignment(cost);
  std::vector<char> cluster_used(nc, 0);
  for (std::size_t i = 0; i < nt; ++i) {
    const int j = i < row_to_col.size() ? row_to_col[i] : -1;
    if (j >= 0 && d2(i, j) <= gate) {
      out.pairs.emplace_back(i, static_cast<std::size_t>(j));
      out.distances.push_back(d2(i, j));
      cluster_used[j] = 1;
    } else {
      out.unassigned_tracks.push_back(i);
    }
  }
  for (std::size_t j = 0; j < nc; ++j) {
    if (!cluster_used[j]) out.unassigned_clusters.push_back(j);
  }
  return out;
}

void kalman_update(Track& track, const Cluster& c) {
  const auto h = observation();
  const MeasurementCovariance s = innovation_covariance(track, c);
  const Eigen::Matrix<double, 4, 2> k =
      track.covariance * h.transpose() * s.inverse();
  track.state += k * (c.centroid - track.position());
  const StateCovariance ikh = StateCovariance::Identity() - k * h;
  StateCovariance p =
      ikh * track.covariance * ikh.transpose() + k * c.noise * k.transpose();
  track.covariance = 0.5 * (p + p.transpose());
}

void update_and_manage(std::vector<Track>& tracks, std::span<const Cluster> clusters,
                       std::span<const Detection> detections, const Assignment& assignment,
                       const TrackerParams& params, int& next_track_id) {
  std::vector<char> hit(tracks.size(), 0);
  for (auto [ti, ci] : assignment.pairs) {
    auto& t = tracks[ti];
    kalman_update(t, clusters[ci]);
    t.last_ids = credited_ids(t, clusters[ci], detections, params.strict_id_credit);
    hit[ti] = 1;
  }

  std::vector<Track> kept;
  kept.reserve(tracks.size() + assignment.unassigned_clusters.size());
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    auto& t = tracks[i];
    t.hit_history = (t.hit_history << 1) | (hit[i] ? 1u : 0u);
    ++t.scans;
    t.misses_in_row = hit[i] ? 0 : t.misses_in_row + 1;

    if (!t.confirmed() && t.hits_in_last(params.confirm_window) >= params.confirm_hits) {
      t.status = TrackStatus::Confirmed;
    }
    if (t.confirmed()) {
      if (t.misses_in_row >= params.coast_limit) continue;
    } else if (t.scans >= params.confirm_window) {
      continue;
    }
    kept.push_back(std::move(t));
  }

  for (auto ci : assignment.unassigned_clusters) {
    auto t = spawn_track(clusters[ci], params, next_track_id++);
    if (params.strict_id_credit) t.last_ids = credited_ids(t, clusters[ci], detections, true);
    kept.push_back(std::move(t));
  }
  tracks = std::move(kept);
}

std::vector<VehicleId> tracked_ids(std::span<const Track> tracks) {
  std::vector<VehicleId> ids;
  for (const auto& t : tracks) {
    if (t.confirmed()) ids.insert(ids.end(), t.last_ids.begin(), t.last_ids.end());
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

void MultiObjectTracker::step(std::span<const Detection> detections, double dt) {
  if (dt > 0.0) {
    for (auto& t : tracks_) t = predict(std::move(t), dt, params_.accel_sigma);
  }
  const auto clusters = cluster(detections, params_.linkage);
  const auto assignment = associate(tracks_, clusters, params_.gate);
  update_and_manage(tracks_, clusters, detections, assignment, params_, next_track_id_);
}

}  // namespace roadside::tracking
