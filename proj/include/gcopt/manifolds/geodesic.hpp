#pragma once

namespace gcopt {

/// A geodesic between two points together with its initial velocity:
/// exp(start, initial_velocity) = end and the length equals
/// distance(start, end). On Hadamard geometries the segment is unique.
template <class M>
struct GeodesicSegment {
  typename M::Point start;
  typename M::Point end;
  typename M::Tangent initial_velocity;
};

template <class M>
GeodesicSegment<M> make_geodesic_segment(const M& m, const typename M::Point& start,
                                         const typename M::Point& end) {
  return GeodesicSegment<M>{start, end, m.log(start, end)};
}

template <class M>
double segment_length(const M& m, const GeodesicSegment<M>& segment) {
  return m.norm(segment.start, segment.initial_velocity);
}

/// Point at parameter time in [0, 1] along the segment.
template <class M>
typename M::Point segment_point(const M& m, const GeodesicSegment<M>& segment,
                                double time) {
  return m.exp(segment.start, m.scale(segment.initial_velocity, time));
}

} // namespace gcopt
