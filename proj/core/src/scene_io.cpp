// Copyright 2026 The teleop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "teleop/scene_io.hpp"

#include <fstream>
#include <iterator>

#include "teleop/error.hpp"
#include "teleop/json_codec.hpp"

namespace teleop {

using codec::json;

json model_to_json(const ObjectModel& m) {
  return json{{"model_id", m.model_id},
              {"half_extents", codec::to_json(m.half_extents)},
              {"mass", m.mass},
              {"grasp_width", m.grasp_width}};
}

ObjectModel model_from_json(const json& value, const std::string& path) {
  ObjectModel m;
  m.model_id = codec::string(codec::member(value, "model_id", path), path + "/model_id");
  m.half_extents = codec::vec3(codec::member(value, "half_extents", path), path + "/half_extents");
  m.mass = codec::number(codec::member(value, "mass", path), path + "/mass");
  m.grasp_width = codec::number(codec::member(value, "grasp_width", path), path + "/grasp_width");
  return m;
}

json desktop_to_json(const DesktopMesh& mesh) {
  json boundary = json::array();
  for (const auto& p : mesh.boundary) boundary.push_back(json::array({p.x(), p.y()}));
  json triangles = json::array();
  for (const auto& t : mesh.triangles) triangles.push_back(json::array({t[0], t[1], t[2]}));
  return json{{"plane", {{"normal", codec::to_json(mesh.normal)}, {"offset", mesh.offset}}},
              {"boundary", std::move(boundary)},
              {"triangles", std::move(triangles)}};
}

DesktopMesh desktop_from_json(const json& value, const std::string& path) {
  const json& plane = codec::member(value, "plane", path);
  Eigen::Vector3d normal = codec::vec3(codec::member(plane, "normal", path + "/plane"), path + "/plane/normal");
  const double offset = codec::number(codec::member(plane, "offset", path + "/plane"), path + "/plane/offset");
  const double norm = normal.norm();
  if (norm < 1e-12) throw ParseError("zero normal", 0, path + "/plane/normal");
  const json& boundary = codec::member(value, "boundary", path);
  if (!boundary.is_array()) throw ParseError("expected an array of [u, v] pairs", 0, path + "/boundary");
  Polygon2 poly;
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    const std::string at = path + "/boundary/" + std::to_string(i);
    const json& pt = boundary[i];
    if (!pt.is_array() || pt.size() != 2) throw ParseError("expected [u, v]", 0, at);
    poly.emplace_back(codec::number(pt[0], at + "/0"), codec::number(pt[1], at + "/1"));
  }
  try {
    return make_mesh(poly, normal / norm, offset / norm);
  } catch (const GeometryError& e) {
    throw ValidationError(std::string("desktop boundary: ") + e.what());
  }
}

namespace {

DesktopDetectParams detect_params_from_json(const json& value, const std::string& path) {
  DesktopDetectParams p;
  auto num = [&](const char* key, auto& field) {
    if (const json* v = codec::optional_member(value, key)) {
      field = static_cast<std::remove_reference_t<decltype(field)>>(codec::number(*v, path + "/" + key));
    }
  };
  num("dist_threshold", p.dist_threshold);
  num("min_inliers", p.min_inliers);
  num("max_planes", p.max_planes);
  num("ransac_iterations", p.ransac_iterations);
  num("cluster_radius", p.cluster_radius);
  num("cell", p.cell);
  num("seed", p.seed);
  return p;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& ref) {
  const std::filesystem::path p(ref);
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

SceneFile parse_scene(std::string_view text, const std::filesystem::path& base_dir) {
  const json doc = codec::parse_text(text);
  SceneFile file;
  SceneState& scene = file.scene;

  const json& catalog = codec::member(doc, "catalog", "");
  if (!catalog.is_array()) throw ParseError("expected an array", 0, "/catalog");
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    ObjectModel m = model_from_json(catalog[i], "/catalog/" + std::to_string(i));
    if (scene.catalog.contains(m.model_id)) {
      throw ValidationError("duplicate model_id '" + m.model_id + "' in catalog");
    }
    scene.catalog.emplace(m.model_id, std::move(m));
  }

  const json& instances = codec::member(doc, "instances", "");
  if (!instances.is_array()) throw ParseError("expected an array", 0, "/instances");
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const std::string path = "/instances/" + std::to_string(i);
    ObjectInstance o;
    o.instance_id = codec::string(codec::member(instances[i], "instance_id", path), path + "/instance_id");
    o.model_id = codec::string(codec::member(instances[i], "model_id", path), path + "/model_id");
    o.actual_pose = codec::pose(codec::member(instances[i], "pose", path), path + "/pose");
    o.ghost_pose = o.actual_pose;
    scene.objects.push_back(std::move(o));
  }

  const json& desktop = codec::member(doc, "desktop", "");
  if (const json* cloud = codec::optional_member(desktop, "cloud")) {
    file.cloud = resolve(base_dir, codec::string(*cloud, "/desktop/cloud"));
    if (const json* params = codec::optional_member(desktop, "detect")) {
      file.detect_params = detect_params_from_json(*params, "/desktop/detect");
    }
  }
  if (codec::optional_member(desktop, "boundary") != nullptr) {
    scene.desktop = desktop_from_json(desktop);
  } else if (file.cloud) {
    try {
      scene.desktop = detect_desktop(read_point_cloud(*file.cloud), file.detect_params);
    } catch (const GeometryError& e) {
      throw ValidationError(std::string("desktop detection: ") + e.what());
    }
  } else {
    throw ParseError("needs either plane + boundary or a cloud reference", 0, "/desktop");
  }

  scene.joints.angles = codec::joint_vector(codec::member(doc, "arm_start", ""), "/arm_start");
  if (const json* chain = codec::optional_member(doc, "chain")) file.chain = resolve(base_dir, codec::string(*chain, "/chain"));
  scene.gripper_aperture = kMaxGripperAperture;
  scene.sim_time = 0.0;

  validate_scene(scene);
  return file;
}

SceneFile load_scene_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scene file '" + path.string() + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_scene(text, path.parent_path());
}

SceneState load_scene(const std::filesystem::path& path) { return load_scene_file(path).scene; }

json scene_to_json(const SceneState& scene) {
  json catalog = json::array();
  for (const auto& [id, m] : scene.catalog) catalog.push_back(model_to_json(m));
  json instances = json::array();
  for (const auto& o : scene.objects) {
    instances.push_back(json{{"instance_id", o.instance_id},
                             {"model_id", o.model_id},
                             {"pose", codec::to_json(o.actual_pose)},
                             {"ghost_pose", codec::to_json(o.ghost_pose)},
                             {"held", o.held}});
  }
  return json{{"catalog", std::move(catalog)},
              {"instances", std::move(instances)},
              {"desktop", desktop_to_json(scene.desktop)},
              {"arm_start", codec::to_json(scene.joints.angles)},
              {"gripper_aperture", scene.gripper_aperture},
              {"sim_time", scene.sim_time}};
}

void save_scene(const std::filesystem::path& path, const SceneState& scene) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write scene file '" + path.string() + "'");
  out << scene_to_json(scene).dump(2) << '\n';
}

}  // namespace teleop
