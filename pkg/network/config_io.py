"""
Plain-text architecture files.

One layer per line: `<kind> <maps> <HxW> <KxK|-> <activation>`, plus an
optional `seed <n>` line. `#` starts a comment. Kinds are input, conv,
max, full and output; activations are identity, sigmoid and softmax.
"""
import hashlib
from pathlib import Path
from typing import Tuple, Union

from components.layer_spec import LayerKind, Activation, LayerSpec
from components.network_config import NetworkConfig
from network.layout import validate_config
from utils.errors import ConfigError

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"
BUILTIN_ARCHITECTURES = ("small", "medium", "large")

_KINDS = {
    "input": LayerKind.INPUT,
    "conv": LayerKind.CONV,
    "max": LayerKind.MAXPOOL,
    "full": LayerKind.FULL,
    "output": LayerKind.OUTPUT,
}
_KIND_NAMES = {kind: name for name, kind in _KINDS.items()}
_ACTIVATIONS = {act.name.lower(): act for act in Activation}


def _dims(token: str, line_no: int) -> Tuple[int, int]:
    try:
        h, w = token.lower().split("x")
        return int(h), int(w)
    except ValueError:
        raise ConfigError(f"line {line_no}: expected HxW, got '{token}'") from None


def parse_config(text: str, name: str = "custom") -> NetworkConfig:
    """
    Parse architecture text into a validated config

    Raises:
        ConfigError: on syntax errors or a broken dimension chain
    """
    layers = []
    seed = 0
    for line_no, line in enumerate(text.splitlines(), start=1):
        tokens = line.split("#", 1)[0].split()
        if not tokens:
            continue
        if tokens[0].lower() == "seed":
            if len(tokens) != 2 or not tokens[1].isdigit():
                raise ConfigError(f"line {line_no}: expected 'seed <unsigned integer>'")
            seed = int(tokens[1])
            continue
        if len(tokens) != 5:
            raise ConfigError(f"line {line_no}: expected '<kind> <maps> <HxW> <KxK|-> <activation>'")
        kind_name, maps, size, kernel, act_name = tokens
        kind = _KINDS.get(kind_name.lower())
        if kind is None:
            raise ConfigError(f"line {line_no}: unknown layer kind '{kind_name}'")
        activation = _ACTIVATIONS.get(act_name.lower())
        if activation is None:
            raise ConfigError(f"line {line_no}: unknown activation '{act_name}'")
        try:
            maps = int(maps)
        except ValueError:
            raise ConfigError(f"line {line_no}: map count '{maps}' is not an integer") from None
        layers.append(LayerSpec(kind, maps, _dims(size, line_no),
                                None if kernel == "-" else _dims(kernel, line_no), activation))

    config = NetworkConfig(layers, seed, name)
    validate_config(config)
    return config


def load_config(path: Union[str, Path]) -> NetworkConfig:
    """Load an architecture file"""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read architecture file {path}: {e}") from e
    return parse_config(text, path.stem)


def config_to_text(config: NetworkConfig) -> str:
    """Canonical text form of a config (parses back to an equal config)"""
    lines = [f"seed {config.seed}"]
    for layer in config.layers:
        kernel = f"{layer.kernel[0]}x{layer.kernel[1]}" if layer.kernel else "-"
        lines.append(f"{_KIND_NAMES[layer.kind]} {layer.maps} "
                     f"{layer.map_size[0]}x{layer.map_size[1]} {kernel} "
                     f"{layer.activation.name.lower()}")
    return "\n".join(lines) + "\n"


def config_hash(config: NetworkConfig) -> int:
    """64-bit digest of the canonical text"""
    digest = hashlib.sha256(config_to_text(config).encode("ascii")).digest()
    return int.from_bytes(digest[:8], "little")


def builtin_config(name: str, seed: int = None) -> NetworkConfig:
    """One of the shipped architectures: small, medium or large"""
    if name not in BUILTIN_ARCHITECTURES:
        raise ConfigError(f"unknown architecture '{name}' (choose from {', '.join(BUILTIN_ARCHITECTURES)})")
    config = load_config(CONFIG_DIR / f"{name}.cfg")
    return config if seed is None else config.with_seed(seed)


def resolve_architecture(arch: str, seed: int = None) -> NetworkConfig:
    """A built-in architecture name or a path to an architecture file"""
    if arch in BUILTIN_ARCHITECTURES:
        return builtin_config(arch, seed)
    config = load_config(arch)
    return config if seed is None else config.with_seed(seed)
