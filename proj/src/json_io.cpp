#include <voxpose/json_io.hpp>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include <voxpose/errors.hpp>

namespace voxpose {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const char* ctx) {
  if (!j.is_object()) throw BadSpec(std::string(ctx) + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw BadSpec(std::string(ctx) + ": unknown key '" + it.key() + "'");
    }
  }
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json color_to_json(const Color& c) { return json::array({c[0], c[1], c[2]}); }

void get_color(const json& j, const char* key, Color& out) {
  if (!j.contains(key)) return;
  const json& a = j.at(key);
  if (!a.is_array() || a.size() != 3) {
    throw BadSpec(std::string(key) + ": expected [r, g, b]");
  }
  for (int i = 0; i < 3; ++i) out[i] = a.at(i).get<float>();
}

const char* kind_name(SceneKind kind) {
  switch (kind) {
    case SceneKind::sphere:
      return "sphere";
    case SceneKind::box:
      return "box";
    case SceneKind::checker_sphere:
      return "checker_sphere";
    case SceneKind::two_objects:
      return "two_objects";
    case SceneKind::uniform_blob:
      return "uniform_blob";
  }
  return "unknown";
}

SceneKind kind_from_name(const std::string& name) {
  for (SceneKind k : {SceneKind::sphere, SceneKind::box, SceneKind::checker_sphere,
                      SceneKind::two_objects, SceneKind::uniform_blob}) {
    if (name == kind_name(k)) return k;
  }
  throw BadSpec("scene.kind: unknown kind '" + name + "'");
}

const char* axis_name(AblationAxis axis) {
  switch (axis) {
    case AblationAxis::none:
      return "none";
    case AblationAxis::subsample:
      return "subsample";
    case AblationAxis::resolution:
      return "resolution";
  }
  return "unknown";
}

AblationAxis axis_from_name(const std::string& name) {
  for (AblationAxis a :
       {AblationAxis::none, AblationAxis::subsample, AblationAxis::resolution}) {
    if (name == axis_name(a)) return a;
  }
  throw BadSpec("ablation: unknown axis '" + name + "'");
}

json scene_to_json_obj(const SceneSpec& s) {
  return json{{"kind", kind_name(s.kind)},
              {"resolution", s.resolution},
              {"extent", s.extent},
              {"density", s.density},
              {"radius", s.radius},
              {"checker_frequency", s.checker_frequency},
              {"color_a", color_to_json(s.color_a)},
              {"color_b", color_to_json(s.color_b)}};
}

SceneSpec scene_from_json_obj(const json& j) {
  check_keys(j,
             {"kind", "resolution", "extent", "density", "radius",
              "checker_frequency", "color_a", "color_b"},
             "scene");
  SceneSpec s;
  if (j.contains("kind")) s.kind = kind_from_name(j.at("kind").get<std::string>());
  get_if(j, "resolution", s.resolution);
  get_if(j, "extent", s.extent);
  get_if(j, "density", s.density);
  get_if(j, "radius", s.radius);
  get_if(j, "checker_frequency", s.checker_frequency);
  get_color(j, "color_a", s.color_a);
  get_color(j, "color_b", s.color_b);
  if (s.resolution < 2) throw BadSpec("scene.resolution: must be >= 2");
  if (!(s.extent > 0)) throw BadSpec("scene.extent: must be positive");
  return s;
}

json pose_to_json_obj(const Pose& p) {
  json rot = json::array();
  for (int r = 0; r < 3; ++r) {
    rot.push_back(json::array(
        {p.rotation(r, 0), p.rotation(r, 1), p.rotation(r, 2)}));
  }
  return json{{"rotation", rot},
              {"translation", json::array({p.translation.x(), p.translation.y(),
                                           p.translation.z()})}};
}

Pose pose_from_json_obj(const json& j) {
  check_keys(j, {"rotation", "translation"}, "pose");
  if (!j.contains("rotation") || !j.contains("translation")) {
    throw BadPose("pose: rotation and translation are required");
  }
  const json& rot = j.at("rotation");
  const json& tr = j.at("translation");
  if (!rot.is_array() || rot.size() != 3 || !tr.is_array() || tr.size() != 3) {
    throw BadPose("pose: rotation must be 3x3 and translation 3-vector");
  }
  Pose p;
  for (int r = 0; r < 3; ++r) {
    const json& row = rot.at(r);
    if (!row.is_array() || row.size() != 3) {
      throw BadPose("pose: rotation must be 3x3");
    }
    for (int c = 0; c < 3; ++c) p.rotation(r, c) = row.at(c).get<double>();
  }
  for (int i = 0; i < 3; ++i) p.translation[i] = tr.at(i).get<double>();
  if (!is_rotation(p.rotation, 1e-6)) {
    throw BadPose("pose: rotation is not orthonormal with determinant +1");
  }
  return p;
}

json intr_to_json_obj(const Intrinsics& intr) {
  return json{
      {"width", intr.width}, {"height", intr.height}, {"focal", intr.focal}};
}

Intrinsics intr_from_json_obj(const json& j, const Intrinsics& defaults) {
  check_keys(j, {"width", "height", "focal"}, "intrinsics");
  Intrinsics intr = defaults;
  get_if(j, "width", intr.width);
  get_if(j, "height", intr.height);
  get_if(j, "focal", intr.focal);
  if (intr.width <= 0 || intr.height <= 0 || !(intr.focal > 0)) {
    throw BadSpec("intrinsics: width, height and focal must be positive");
  }
  return intr;
}

json render_to_json_obj(const RenderConfig& r) {
  return json{{"step_size", r.step_size},
              {"background", color_to_json(r.background)},
              {"sigma_threshold", r.sigma_threshold}};
}

RenderConfig render_from_json_obj(const json& j) {
  check_keys(j, {"step_size", "background", "sigma_threshold"}, "render");
  RenderConfig r;
  get_if(j, "step_size", r.step_size);
  get_color(j, "background", r.background);
  get_if(j, "sigma_threshold", r.sigma_threshold);
  return r;
}

json optimizer_to_json_obj(const OptimizerConfig& o) {
  return json{{"lr_rotation", o.lr_rotation},
              {"lr_translation", o.lr_translation},
              {"lr_decay", o.lr_decay},
              {"decay_interval", o.decay_interval},
              {"max_epochs", o.max_epochs},
              {"epsilon_per_pixel", o.epsilon_per_pixel},
              {"subsample_fraction", o.subsample_fraction},
              {"resample_each_epoch", o.resample_each_epoch},
              {"translation_step", o.translation_step},
              {"rotation_step", o.rotation_step},
              {"decay_probe_steps", o.decay_probe_steps},
              {"rotation_epochs", o.alternation.rotation_epochs},
              {"translation_epochs", o.alternation.translation_epochs},
              {"seed", o.seed}};
}

OptimizerConfig optimizer_from_json_obj(const json& j) {
  check_keys(j,
             {"lr_rotation", "lr_translation", "lr_decay", "decay_interval",
              "max_epochs", "epsilon_per_pixel", "subsample_fraction",
              "resample_each_epoch", "translation_step", "rotation_step",
              "decay_probe_steps", "rotation_epochs", "translation_epochs",
              "seed"},
             "optimizer");
  OptimizerConfig o;
  get_if(j, "lr_rotation", o.lr_rotation);
  get_if(j, "lr_translation", o.lr_translation);
  get_if(j, "lr_decay", o.lr_decay);
  get_if(j, "decay_interval", o.decay_interval);
  get_if(j, "max_epochs", o.max_epochs);
  get_if(j, "epsilon_per_pixel", o.epsilon_per_pixel);
  get_if(j, "subsample_fraction", o.subsample_fraction);
  get_if(j, "resample_each_epoch", o.resample_each_epoch);
  get_if(j, "translation_step", o.translation_step);
  get_if(j, "rotation_step", o.rotation_step);
  get_if(j, "decay_probe_steps", o.decay_probe_steps);
  get_if(j, "rotation_epochs", o.alternation.rotation_epochs);
  get_if(j, "translation_epochs", o.alternation.translation_epochs);
  get_if(j, "seed", o.seed);
  if (o.max_epochs < 1) throw BadSpec("optimizer.max_epochs: must be >= 1");
  if (!(o.subsample_fraction > 0 && o.subsample_fraction <= 1)) {
    throw BadSpec("optimizer.subsample_fraction: must be in (0, 1]");
  }
  if (!(o.lr_decay >= 0 && o.lr_decay < 1)) {
    throw BadSpec("optimizer.lr_decay: must be in [0, 1)");
  }
  if (o.alternation.rotation_epochs < 1 || o.alternation.translation_epochs < 1) {
    throw BadSpec("optimizer: alternation epochs must be >= 1");
  }
  return o;
}

}  // namespace

std::string to_json(const Pose& pose) { return pose_to_json_obj(pose).dump(2); }

Pose pose_from_json(const std::string& text) {
  try {
    return pose_from_json_obj(json::parse(text));
  } catch (const json::exception& e) {
    throw BadPose(std::string("pose: ") + e.what());
  }
}

std::string to_json(const SceneSpec& spec) {
  return scene_to_json_obj(spec).dump(2);
}

SceneSpec scene_from_json(const std::string& text) {
  try {
    return scene_from_json_obj(json::parse(text));
  } catch (const json::exception& e) {
    throw BadSpec(std::string("scene: ") + e.what());
  }
}

std::string to_json(const ExperimentSpec& spec) {
  json j{{"scene", scene_to_json_obj(spec.scene)},
         {"intrinsics", intr_to_json_obj(spec.intrinsics)},
         {"render", render_to_json_obj(spec.render)},
         {"optimizer", optimizer_to_json_obj(spec.optimizer)},
         {"perturb",
          json{{"max_rotation_deg", spec.perturb.max_rotation_deg},
               {"max_translation", spec.perturb.max_translation}}},
         {"cutoffs",
          json{{"rotation_deg", spec.cutoffs.rotation_deg},
               {"translation", spec.cutoffs.translation}}},
         {"poses", spec.poses},
         {"camera_radius", spec.camera_radius},
         {"master_seed", spec.master_seed},
         {"ablation", axis_name(spec.ablation)},
         {"subsample_fractions", spec.subsample_fractions},
         {"resolutions", spec.resolutions},
         {"jobs", spec.jobs}};
  return j.dump(2);
}

ExperimentSpec experiment_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    check_keys(j,
               {"scene", "intrinsics", "render", "optimizer", "perturb",
                "cutoffs", "poses", "camera_radius", "master_seed", "ablation",
                "subsample_fractions", "resolutions", "jobs"},
               "experiment");
    ExperimentSpec spec;
    if (j.contains("scene")) spec.scene = scene_from_json_obj(j.at("scene"));
    if (j.contains("intrinsics")) {
      spec.intrinsics = intr_from_json_obj(j.at("intrinsics"), spec.intrinsics);
    }
    if (j.contains("render")) spec.render = render_from_json_obj(j.at("render"));
    if (j.contains("optimizer")) {
      spec.optimizer = optimizer_from_json_obj(j.at("optimizer"));
    }
    if (j.contains("perturb")) {
      const json& p = j.at("perturb");
      check_keys(p, {"max_rotation_deg", "max_translation"}, "perturb");
      get_if(p, "max_rotation_deg", spec.perturb.max_rotation_deg);
      get_if(p, "max_translation", spec.perturb.max_translation);
      if (spec.perturb.max_rotation_deg < 0 || spec.perturb.max_translation < 0) {
        throw BadSpec("perturb: magnitudes must be non-negative");
      }
    }
    if (j.contains("cutoffs")) {
      const json& c = j.at("cutoffs");
      check_keys(c, {"rotation_deg", "translation"}, "cutoffs");
      get_if(c, "rotation_deg", spec.cutoffs.rotation_deg);
      get_if(c, "translation", spec.cutoffs.translation);
    }
    get_if(j, "poses", spec.poses);
    get_if(j, "camera_radius", spec.camera_radius);
    get_if(j, "master_seed", spec.master_seed);
    if (j.contains("ablation")) {
      spec.ablation = axis_from_name(j.at("ablation").get<std::string>());
    }
    get_if(j, "subsample_fractions", spec.subsample_fractions);
    get_if(j, "resolutions", spec.resolutions);
    get_if(j, "jobs", spec.jobs);
    if (spec.poses < 1) throw BadSpec("experiment.poses: must be >= 1");
    if (!(spec.camera_radius > 0)) {
      throw BadSpec("experiment.camera_radius: must be positive");
    }
    return spec;
  } catch (const json::exception& e) {
    throw BadSpec(std::string("experiment: ") + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw IoError("write failed for " + path.string());
}

}  // namespace voxpose
