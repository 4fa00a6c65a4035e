#pragma once

#include <string>

#include "roomforge/roomforge.hpp"

namespace testutil {

using namespace roomforge;

inline RoomStructure square_room(double w, double h) {
  RoomStructure r;
  r.room_type = RoomType::Bedroom;
  r.name = "test_room";
  r.floor.pts = {{0, 0}, {w, 0}, {w, h}, {0, h}};
  return r;
}

inline Scene empty_scene(double w = 4.0, double h = 4.0) {
  Scene s;
  s.structure = square_room(w, h);
  return s;
}

inline PlacedObject placed(const std::string& id, const std::string& type, double x, double y,
                           double rot = 0.0, const std::string& support = "") {
  const ObjectClass& cls = Catalog::builtin().get(type);
  PlacedObject o;
  o.id = id;
  o.type = type;
  o.layer = cls.layer;
  o.position = {x, y};
  o.rotation = rot;
  o.width = cls.width;
  o.depth = cls.depth;
  o.support = support;
  return o;
}

inline ObjectEntry entry(const std::string& id, const std::string& type) {
  ObjectEntry e;
  e.id = id;
  e.object_type = type;
  e.layer = Catalog::builtin().get(type).layer;
  return e;
}

inline Relationship rel(const std::string& subject, RelationKind kind, const std::string& target,
                        RelationOrigin origin = RelationOrigin::Explicit) {
  Relationship r;
  r.subject = subject;
  r.kind = kind;
  r.target = target;
  r.origin = origin;
  r.weight_class = origin == RelationOrigin::Explicit ? WeightClass::Explicit
                                                      : WeightClass::StructuralImplicit;
  return r;
}

}  // namespace testutil
