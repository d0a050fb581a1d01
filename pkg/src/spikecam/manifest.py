"""Plain-text key=value configs and dataset manifests."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .scenes import KINDS
from .simulator import SimConfig


class ConfigError(ValueError):
    pass


def parse_kv(path) -> dict[str, str]:
    """Parse a key=value file; '#' starts a comment, blanks ignored."""
    values: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def _take(values: dict[str, str], key: str, cast, default):
    if key not in values:
        return default
    raw = values.pop(key)
    try:
        if cast is bool:
            return raw.strip() in ("1", "true", "yes", "on")
        return cast(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc


@dataclass
class DatasetConfig:
    """Everything `gen-dataset` needs, parsed from a key=value file."""

    scenes: int = 4
    height: int = 64
    width: int = 64
    window_len: int = 41
    num_windows: int = 21
    stream_len: int = 0  # 0 means num_windows * window_len
    kinds: tuple[str, ...] = KINDS
    darken_min: float = 0.02
    darken_max: float = 0.1
    seed: int = 0
    image_format: str = "pgm"
    sim: SimConfig = field(default_factory=SimConfig)

    def __post_init__(self):
        if self.scenes <= 0 or self.height <= 0 or self.width <= 0:
            raise ConfigError("scenes and dimensions must be positive")
        if self.window_len % 2 != 1 or self.window_len <= 0:
            raise ConfigError("window_len must be a positive odd number")
        if self.num_windows <= 0:
            raise ConfigError("num_windows must be positive")
        if self.stream_len == 0:
            self.stream_len = self.num_windows * self.window_len
        if self.stream_len < self.num_windows * self.window_len:
            raise ConfigError("stream_len shorter than num_windows * window_len")
        if not self.kinds or any(k not in KINDS for k in self.kinds):
            raise ConfigError(f"kinds must be drawn from {KINDS}")
        if not (0.0 < self.darken_min <= self.darken_max <= 1.0):
            raise ConfigError("need 0 < darken_min <= darken_max <= 1")
        if self.image_format not in ("pgm", "png"):
            raise ConfigError("image_format must be pgm or png")

    @classmethod
    def from_file(cls, path) -> "DatasetConfig":
        values = parse_kv(path)
        defaults = cls()
        sim = SimConfig(
            threshold=_take(values, "threshold", float, 1.0),
            gain=_take(values, "gain", float, 0.25),
            dark_mean=_take(values, "dark_mean", float, SimConfig().dark_mean),
            dark_fpn_sigma=_take(values, "dark_fpn_sigma", float,
                                 SimConfig().dark_fpn_sigma),
            shot_noise=_take(values, "shot_noise", bool, False),
            shot_photons_per_unit=_take(values, "shot_photons_per_unit", float,
                                        1000.0),
        )
        kinds = _take(values, "kinds", str, ",".join(defaults.kinds))
        cfg = cls(
            scenes=_take(values, "scenes", int, defaults.scenes),
            height=_take(values, "height", int, defaults.height),
            width=_take(values, "width", int, defaults.width),
            window_len=_take(values, "window_len", int, defaults.window_len),
            num_windows=_take(values, "num_windows", int, defaults.num_windows),
            stream_len=_take(values, "stream_len", int, 0),
            kinds=tuple(k.strip() for k in kinds.split(",") if k.strip()),
            darken_min=_take(values, "darken_min", float, defaults.darken_min),
            darken_max=_take(values, "darken_max", float, defaults.darken_max),
            seed=_take(values, "seed", int, defaults.seed),
            image_format=_take(values, "image_format", str, defaults.image_format),
            sim=sim,
        )
        if values:
            raise ConfigError(f"unknown config keys: {sorted(values)}")
        return cfg


@dataclass
class SceneEntry:
    """One generated scene as recorded in the manifest."""

    scene_id: str
    kind: str
    seed: int
    darkening: float
    stream_path: str
    gt_dir: str


@dataclass
class DatasetManifest:
    config: DatasetConfig
    scenes: list[SceneEntry]

    def gt_paths(self, entry: SceneEntry) -> list[str]:
        ext = self.config.image_format
        return [f"{entry.gt_dir}/win{i:04d}.{ext}"
                for i in range(self.config.num_windows)]


def write_manifest(manifest: DatasetManifest, path) -> None:
    cfg = manifest.config
    lines = [
        "version=1",
        f"scenes={cfg.scenes}",
        f"height={cfg.height}",
        f"width={cfg.width}",
        f"window_len={cfg.window_len}",
        f"num_windows={cfg.num_windows}",
        f"stream_len={cfg.stream_len}",
        f"kinds={','.join(cfg.kinds)}",
        f"darken_min={cfg.darken_min!r}",
        f"darken_max={cfg.darken_max!r}",
        f"seed={cfg.seed}",
        f"image_format={cfg.image_format}",
        f"threshold={cfg.sim.threshold!r}",
        f"gain={cfg.sim.gain!r}",
        f"dark_mean={cfg.sim.dark_mean!r}",
        f"dark_fpn_sigma={cfg.sim.dark_fpn_sigma!r}",
        f"shot_noise={int(cfg.sim.shot_noise)}",
        f"shot_photons_per_unit={cfg.sim.shot_photons_per_unit!r}",
        f"scene_count={len(manifest.scenes)}",
    ]
    for i, entry in enumerate(manifest.scenes):
        lines += [
            f"scene.{i}.id={entry.scene_id}",
            f"scene.{i}.kind={entry.kind}",
            f"scene.{i}.seed={entry.seed}",
            f"scene.{i}.darkening={entry.darkening!r}",
            f"scene.{i}.stream={entry.stream_path}",
            f"scene.{i}.gt_dir={entry.gt_dir}",
        ]
    Path(path).write_text("\n".join(lines) + "\n")


def parse_manifest(path) -> DatasetManifest:
    values = parse_kv(path)
    if values.pop("version", None) != "1":
        raise ConfigError(f"unsupported manifest version in {path}")
    sim = SimConfig(
        threshold=float(values.pop("threshold")),
        gain=float(values.pop("gain")),
        dark_mean=float(values.pop("dark_mean")),
        dark_fpn_sigma=float(values.pop("dark_fpn_sigma")),
        shot_noise=values.pop("shot_noise") == "1",
        shot_photons_per_unit=float(values.pop("shot_photons_per_unit")),
    )
    cfg = DatasetConfig(
        scenes=int(values.pop("scenes")),
        height=int(values.pop("height")),
        width=int(values.pop("width")),
        window_len=int(values.pop("window_len")),
        num_windows=int(values.pop("num_windows")),
        stream_len=int(values.pop("stream_len")),
        kinds=tuple(values.pop("kinds").split(",")),
        darken_min=float(values.pop("darken_min")),
        darken_max=float(values.pop("darken_max")),
        seed=int(values.pop("seed")),
        image_format=values.pop("image_format"),
        sim=sim,
    )
    count = int(values.pop("scene_count"))
    scenes = []
    try:
        for i in range(count):
            scenes.append(SceneEntry(
                scene_id=values.pop(f"scene.{i}.id"),
                kind=values.pop(f"scene.{i}.kind"),
                seed=int(values.pop(f"scene.{i}.seed")),
                darkening=float(values.pop(f"scene.{i}.darkening")),
                stream_path=values.pop(f"scene.{i}.stream"),
                gt_dir=values.pop(f"scene.{i}.gt_dir"),
            ))
    except KeyError as exc:
        raise ConfigError(f"manifest missing key {exc}") from exc
    if values:
        raise ConfigError(f"unknown manifest keys: {sorted(values)}")
    return DatasetManifest(config=cfg, scenes=scenes)


def validate_manifest(manifest: DatasetManifest, root) -> None:
    """Check that every referenced file exists and streams decode."""
    from .codec import read_spk

    root = Path(root)
    cfg = manifest.config
    for entry in manifest.scenes:
        stream = read_spk(root / entry.stream_path)
        if (stream.height, stream.width) != (cfg.height, cfg.width):
            raise ConfigError(f"{entry.stream_path}: unexpected dimensions")
        if cfg.num_windows * cfg.window_len > stream.length:
            raise ConfigError(f"{entry.stream_path}: stream shorter than K*L")
        for rel in manifest.gt_paths(entry):
            if not (root / rel).exists():
                raise ConfigError(f"missing ground-truth image {rel}")
