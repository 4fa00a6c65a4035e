#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "roomforge/config.hpp"

namespace roomforge {

enum class Layer { Furniture, SmallObject, Decoration };

inline std::string_view layer_name(Layer l) {
  switch (l) {
    case Layer::Furniture: return "furniture";
    case Layer::SmallObject: return "small_object";
    case Layer::Decoration: return "decoration";
  }
  return "furniture";
}

enum class Receptacle { None, Surface, Container };

struct ObjectClass {
  std::string type;           // canonical PascalCase name
  Layer layer = Layer::Furniture;
  double width = 0.5;         // footprint, meters
  double depth = 0.5;
  int priority = 0;           // placement priority q, higher places first
  Receptacle receptacle = Receptacle::None;
  bool pickupable = false;
  bool openable = false;
  bool toggleable = false;
  bool sliceable = false;
  bool heatable = false;
  bool coolable = false;
  bool cleanable = false;
  bool wall_mounted = false;  // placed on wall segments (paintings, mirrors)
  bool structural = false;    // may bind to a fixed room-structure element
  bool nav_blocking = true;   // occupies floor for navigation
};

// "DeskLamp" -> "desk lamp"
inline std::string display_name(std::string_view type) {
  std::string out;
  for (size_t i = 0; i < type.size(); ++i) {
    char c = type[i];
    if (std::isupper(static_cast<unsigned char>(c)) && i > 0) out.push_back(' ');
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

namespace detail {

// Default catalog, a versioned configuration document. Same format as an
// external catalog file passed via --catalog.
inline constexpr const char* kDefaultCatalogToml = R"TOML(
# object type catalog, version 1
version = 1

# layer: furniture | small_object | decoration
# footprint: [width, depth] meters
# receptacle: surface | container
# states: pickupable openable toggleable sliceable heatable coolable cleanable
# flags: wall_mounted, structural (binds to fixed room elements), nav_blocking

[type.Bed]
layer = "furniture"
footprint = [2.0, 1.6]
priority = 100
receptacle = "surface"

[type.Sofa]
layer = "furniture"
footprint = [2.0, 0.9]
priority = 95
receptacle = "surface"

[type.DiningTable]
layer = "furniture"
footprint = [1.6, 0.9]
priority = 90
receptacle = "surface"

[type.CounterTop]
layer = "furniture"
footprint = [2.4, 0.65]
priority = 88
receptacle = "surface"
structural = true

[type.Desk]
layer = "furniture"
footprint = [1.2, 0.6]
priority = 85
receptacle = "surface"

[type.Dresser]
layer = "furniture"
footprint = [1.1, 0.5]
priority = 80
receptacle = "surface"

[type.Wardrobe]
layer = "furniture"
footprint = [1.2, 0.6]
priority = 79
states = ["openable"]
receptacle = "container"

[type.TVStand]
layer = "furniture"
footprint = [1.4, 0.45]
priority = 78
receptacle = "surface"

[type.Bookshelf]
layer = "furniture"
footprint = [0.9, 0.35]
priority = 77
receptacle = "surface"

[type.Fridge]
layer = "furniture"
footprint = [0.9, 0.8]
priority = 75
receptacle = "container"
states = ["openable"]
structural = true

[type.Oven]
layer = "furniture"
footprint = [0.75, 0.65]
priority = 74
receptacle = "container"
states = ["openable", "toggleable"]
structural = true

[type.Cabinet]
layer = "furniture"
footprint = [0.9, 0.45]
priority = 73
receptacle = "container"
states = ["openable"]
structural = true

[type.Bathtub]
layer = "furniture"
footprint = [1.7, 0.8]
priority = 71
receptacle = "container"
structural = true

[type.Sink]
layer = "furniture"
footprint = [0.7, 0.5]
priority = 70
receptacle = "container"
structural = true

[type.CoffeeTable]
layer = "furniture"
footprint = [1.0, 0.6]
priority = 68
receptacle = "surface"

[type.Toilet]
layer = "furniture"
footprint = [0.7, 0.45]
priority = 66

[type.SideTable]
layer = "furniture"
footprint = [0.55, 0.55]
priority = 64
receptacle = "surface"

[type.Nightstand]
layer = "furniture"
footprint = [0.45, 0.4]
priority = 60
receptacle = "surface"

[type.Armchair]
layer = "furniture"
footprint = [0.9, 0.85]
priority = 58
receptacle = "surface"

[type.Chair]
layer = "furniture"
footprint = [0.5, 0.5]
priority = 55
receptacle = "surface"

[type.Stool]
layer = "furniture"
footprint = [0.4, 0.4]
priority = 50
receptacle = "surface"

[type.FloorLamp]
layer = "furniture"
footprint = [0.35, 0.35]
priority = 45
states = ["toggleable"]

[type.Ottoman]
layer = "furniture"
footprint = [0.6, 0.45]
priority = 44
receptacle = "surface"

[type.Safe]
layer = "furniture"
footprint = [0.5, 0.5]
priority = 43
receptacle = "container"
states = ["openable"]

[type.GarbageCan]
layer = "furniture"
footprint = [0.35, 0.35]
priority = 42
receptacle = "container"

[type.Window]
layer = "furniture"
footprint = [1.2, 0.1]
priority = 99
structural = true
wall_mounted = true
nav_blocking = false

[type.Door]
layer = "furniture"
footprint = [0.9, 0.1]
priority = 98
structural = true
wall_mounted = true
nav_blocking = false

[type.Microwave]
layer = "small_object"
footprint = [0.5, 0.35]
priority = 40
receptacle = "container"
states = ["openable", "toggleable"]

[type.Television]
layer = "small_object"
footprint = [0.95, 0.15]
priority = 39
states = ["toggleable"]

[type.CoffeeMachine]
layer = "small_object"
footprint = [0.3, 0.3]
priority = 38
states = ["toggleable"]

[type.Laptop]
layer = "small_object"
footprint = [0.35, 0.25]
priority = 36
states = ["pickupable", "openable", "toggleable"]

[type.Box]
layer = "small_object"
footprint = [0.4, 0.3]
priority = 34
receptacle = "container"
states = ["pickupable", "openable"]

[type.Plate]
layer = "small_object"
footprint = [0.26, 0.26]
priority = 32
receptacle = "surface"
states = ["pickupable", "cleanable"]

[type.Bowl]
layer = "small_object"
footprint = [0.18, 0.18]
priority = 31
receptacle = "surface"
states = ["pickupable", "cleanable"]

[type.Pot]
layer = "small_object"
footprint = [0.25, 0.25]
priority = 30
states = ["pickupable", "cleanable"]

[type.Pan]
layer = "small_object"
footprint = [0.25, 0.25]
priority = 29
states = ["pickupable", "cleanable"]

[type.Toaster]
layer = "small_object"
footprint = [0.3, 0.2]
priority = 28
states = ["toggleable"]

[type.DeskLamp]
layer = "small_object"
footprint = [0.2, 0.2]
priority = 27
states = ["toggleable"]

[type.AlarmClock]
layer = "small_object"
footprint = [0.15, 0.1]
priority = 25
states = ["pickupable"]

[type.Book]
layer = "small_object"
footprint = [0.2, 0.15]
priority = 22
states = ["pickupable"]

[type.Vase]
layer = "small_object"
footprint = [0.15, 0.15]
priority = 21
states = ["pickupable"]

[type.Cup]
layer = "small_object"
footprint = [0.1, 0.1]
priority = 20
states = ["pickupable", "cleanable", "coolable"]

[type.Mug]
layer = "small_object"
footprint = [0.12, 0.1]
priority = 19
states = ["pickupable", "cleanable", "heatable", "coolable"]

[type.Bottle]
layer = "small_object"
footprint = [0.1, 0.1]
priority = 18
states = ["pickupable", "coolable", "cleanable"]

[type.WineBottle]
layer = "small_object"
footprint = [0.1, 0.1]
priority = 18
states = ["pickupable", "coolable"]

[type.Bread]
layer = "small_object"
footprint = [0.25, 0.12]
priority = 17
states = ["pickupable", "sliceable", "heatable"]

[type.Apple]
layer = "small_object"
footprint = [0.1, 0.1]
priority = 16
states = ["pickupable", "sliceable", "heatable", "coolable", "cleanable"]

[type.Tomato]
layer = "small_object"
footprint = [0.09, 0.09]
priority = 15
states = ["pickupable", "sliceable", "heatable", "coolable", "cleanable"]

[type.Potato]
layer = "small_object"
footprint = [0.09, 0.09]
priority = 14
states = ["pickupable", "sliceable", "heatable", "coolable", "cleanable"]

[type.Egg]
layer = "small_object"
footprint = [0.06, 0.06]
priority = 13
states = ["pickupable", "heatable", "coolable"]

[type.Knife]
layer = "small_object"
footprint = [0.3, 0.05]
priority = 12
states = ["pickupable", "cleanable"]

[type.Fork]
layer = "small_object"
footprint = [0.2, 0.03]
priority = 11
states = ["pickupable", "cleanable"]

[type.Spoon]
layer = "small_object"
footprint = [0.2, 0.03]
priority = 10
states = ["pickupable", "cleanable"]

[type.Pen]
layer = "small_object"
footprint = [0.15, 0.02]
priority = 9
states = ["pickupable"]

[type.Pencil]
layer = "small_object"
footprint = [0.15, 0.02]
priority = 9
states = ["pickupable"]

[type.KeyChain]
layer = "small_object"
footprint = [0.08, 0.05]
priority = 8
states = ["pickupable"]

[type.CreditCard]
layer = "small_object"
footprint = [0.09, 0.06]
priority = 7
states = ["pickupable"]

[type.CellPhone]
layer = "small_object"
footprint = [0.15, 0.08]
priority = 6
states = ["pickupable", "toggleable"]

[type.RemoteControl]
layer = "small_object"
footprint = [0.18, 0.05]
priority = 5
states = ["pickupable"]

[type.TissueBox]
layer = "small_object"
footprint = [0.24, 0.12]
priority = 4
states = ["pickupable"]

[type.SoapBar]
layer = "small_object"
footprint = [0.1, 0.06]
priority = 3
states = ["pickupable", "cleanable"]

[type.SprayBottle]
layer = "small_object"
footprint = [0.1, 0.1]
priority = 3
states = ["pickupable"]

[type.Candle]
layer = "small_object"
footprint = [0.08, 0.08]
priority = 3
states = ["pickupable", "toggleable"]

[type.Newspaper]
layer = "small_object"
footprint = [0.3, 0.2]
priority = 3
states = ["pickupable"]

[type.Cloth]
layer = "small_object"
footprint = [0.2, 0.2]
priority = 3
states = ["pickupable", "cleanable"]

[type.Towel]
layer = "small_object"
footprint = [0.35, 0.25]
priority = 3
states = ["pickupable", "cleanable"]

[type.Pillow]
layer = "small_object"
footprint = [0.5, 0.35]
priority = 3
states = ["pickupable"]

[type.Statue]
layer = "small_object"
footprint = [0.15, 0.15]
priority = 3
states = ["pickupable"]

[type.Watch]
layer = "small_object"
footprint = [0.08, 0.08]
priority = 3
states = ["pickupable"]

[type.WateringCan]
layer = "small_object"
footprint = [0.25, 0.2]
priority = 3
states = ["pickupable"]

[type.Painting]
layer = "decoration"
footprint = [0.9, 0.04]
priority = 8
wall_mounted = true
nav_blocking = false

[type.Mirror]
layer = "decoration"
footprint = [0.6, 0.04]
priority = 7
wall_mounted = true
nav_blocking = false

[type.Carpet]
layer = "decoration"
footprint = [1.6, 1.2]
priority = 5
nav_blocking = false

[type.HousePlant]
layer = "decoration"
footprint = [0.4, 0.4]
priority = 6
nav_blocking = false

# name unification applied at parse time
[aliases]
picture = "Painting"
"bedside cabinet" = "Nightstand"
"bedside table" = "Nightstand"
nightstand = "Nightstand"
refrigerator = "Fridge"
"double bed" = "Bed"
couch = "Sofa"
tv = "Television"
"tv stand" = "TVStand"
lamp = "FloorLamp"
"coffee maker" = "CoffeeMachine"
rug = "Carpet"
)TOML";

}  // namespace detail

// Canonical object type catalog: layers, footprints, supported states, and the
// placement priority table. Loaded from a config document; ships with an
// embedded default.
class Catalog {
 public:
  static const Catalog& builtin() {
    static const Catalog c = from_config(ConfigDoc::parse(detail::kDefaultCatalogToml));
    return c;
  }

  static Catalog from_config(const ConfigDoc& doc) {
    Catalog cat;
    cat.version_ = static_cast<int>(doc.number_or("version", 1));
    std::map<std::string, bool> seen;
    for (const auto& key : doc.keys_under("type")) {
      // keys look like "Bed.layer"; collect type names
      size_t dot = key.find('.');
      if (dot == std::string::npos) continue;
      seen[key.substr(0, dot)] = true;
    }
    for (const auto& [name, _] : seen) {
      std::string p = "type." + name + ".";
      ObjectClass oc;
      oc.type = name;
      std::string layer = doc.str_or(p + "layer", "furniture");
      if (layer == "furniture") oc.layer = Layer::Furniture;
      else if (layer == "small_object") oc.layer = Layer::SmallObject;
      else if (layer == "decoration") oc.layer = Layer::Decoration;
      else throw std::runtime_error("catalog: bad layer for " + name);
      auto fp = doc.num_list(p + "footprint");
      if (fp.size() != 2) throw std::runtime_error("catalog: bad footprint for " + name);
      oc.width = fp[0];
      oc.depth = fp[1];
      oc.priority = static_cast<int>(doc.number_or(p + "priority", 0));
      std::string rec = doc.str_or(p + "receptacle", "none");
      if (rec == "surface") oc.receptacle = Receptacle::Surface;
      else if (rec == "container") oc.receptacle = Receptacle::Container;
      else if (rec == "none") oc.receptacle = Receptacle::None;
      else throw std::runtime_error("catalog: bad receptacle for " + name);
      if (doc.has(p + "states")) {
        for (const auto& s : doc.str_list(p + "states")) {
          if (s == "pickupable") oc.pickupable = true;
          else if (s == "openable") oc.openable = true;
          else if (s == "toggleable") oc.toggleable = true;
          else if (s == "sliceable") oc.sliceable = true;
          else if (s == "heatable") oc.heatable = true;
          else if (s == "coolable") oc.coolable = true;
          else if (s == "cleanable") oc.cleanable = true;
          else throw std::runtime_error("catalog: unknown state " + s);
        }
      }
      oc.wall_mounted = doc.boolean_or(p + "wall_mounted", false);
      oc.structural = doc.boolean_or(p + "structural", false);
      oc.nav_blocking = doc.boolean_or(p + "nav_blocking", true);
      cat.classes_[name] = oc;
      cat.lookup_[fold(name)] = name;
    }
    for (const auto& key : doc.keys_under("aliases")) {
      cat.lookup_[fold(key)] = doc.str("aliases." + key);
    }
    return cat;
  }

  int version() const { return version_; }

  // Resolve a user-facing name ("desk lamp", "DeskLamp", "picture") to its
  // canonical type; nullopt when unknown.
  std::optional<std::string> canonical(std::string_view name) const {
    auto it = lookup_.find(fold(name));
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }

  bool has(const std::string& type) const { return classes_.count(type) > 0; }

  const ObjectClass& get(const std::string& type) const {
    auto it = classes_.find(type);
    if (it == classes_.end()) throw std::runtime_error("unknown object type: " + type);
    return it->second;
  }

  const std::map<std::string, ObjectClass>& classes() const { return classes_; }

 private:
  // Case/space/underscore-insensitive key for name unification.
  static std::string fold(std::string_view s) {
    std::string out;
    for (char c : s) {
      if (c == ' ' || c == '_' || c == '-') continue;
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
  }

  int version_ = 1;
  std::map<std::string, ObjectClass> classes_;
  std::map<std::string, std::string> lookup_;
};

}  // namespace roomforge
