"""
Preset management system

Named experiment bundles: a CLI command plus its arguments. Built-in presets
reproduce the published claims; custom presets live as JSON or YAML files.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from .error import PresetError


PRESET_COMMANDS = ("verify-counterexample", "dioph", "square-obstruction", "beta-bound",
                   "artin-estimate", "greenberg")

# Built-in presets
BUILTIN_PRESETS: Dict[str, Dict[str, Any]] = {
    "counterexample-grid": {
        "name": "counterexample-grid",
        "description": "ord(u^2 - z v^2) = (p+2)k - 4 for p, k in 3..8 over Q",
        "command": "verify-counterexample",
        "args": {"p": "3..8", "k": "3..8", "field": "Q"},
    },
    "special-diagonal": {
        "name": "special-diagonal",
        "description": "ord P = k^2 - 4 and min ord = 2k - 3 for k in 5..8, p = k - 2",
        "command": "beta-bound",
        "args": {"i": "8,10,12,14", "field": "Q"},
    },
    "quadratic-bound": {
        "name": "quadratic-bound",
        "description": "beta_2(i) >= ((i+2)/2)^2 - 5 witnesses for i in 8..12",
        "command": "beta-bound",
        "args": {"i": "8..12", "field": "Q"},
    },
    "liouville-table": {
        "name": "liouville-table",
        "description": "Affine fits of ord(x_p - u/v) against ord v, p and k in 3..8",
        "command": "dioph",
        "args": {"p": "3..8", "k": "3..8", "field": "Q", "fit": True},
    },
    "square-obstruction-f3": {
        "name": "square-obstruction-f3",
        "description": "sup ord(z_p - t^2) = p by lifting and exhaustive search over F3",
        "command": "square-obstruction",
        "args": {"p": "3..5", "field": "F3", "exhaustive": True},
    },
    "square-obstruction-f5": {
        "name": "square-obstruction-f5",
        "description": "sup ord(z_p - t^2) = p by lifting and exhaustive search over F5",
        "command": "square-obstruction",
        "args": {"p": "3..5", "field": "F5", "exhaustive": True},
    },
    "square-obstruction-q": {
        "name": "square-obstruction-q",
        "description": "sup ord(z_p - t^2) = p over Q (exhaustive over a small pool)",
        "command": "square-obstruction",
        "args": {"p": "3..5", "field": "Q", "exhaustive": True},
    },
    "greenberg": {
        "name": "greenberg",
        "description": "Brute-forced beta(i) for X, X^2 - T, X^2 - T*Y^2 over F3",
        "command": "greenberg",
        "args": {"field": "F3", "max_i": 3, "max_jet_order": 5},
    },
}


class PresetManager:
    """Manage presets"""

    def __init__(self, preset_dir: Optional[Path] = None):
        """
        Initialize preset manager

        Args:
            preset_dir: Directory for custom presets
        """
        self.preset_dir = preset_dir or Path.home() / ".artinlab" / "presets"

    def _custom_files(self) -> Dict[str, Path]:
        files: Dict[str, Path] = {}
        if self.preset_dir.exists():
            for pattern in ("*.json", "*.yaml", "*.yml"):
                for preset_file in sorted(self.preset_dir.glob(pattern)):
                    files.setdefault(preset_file.stem, preset_file)
        return files

    def list_presets(self) -> List[str]:
        """List all available presets (built-in and custom)"""
        presets = set(BUILTIN_PRESETS)
        presets.update(self._custom_files())
        return sorted(presets)

    def get_preset(self, name: str) -> Dict[str, Any]:
        """
        Get preset by name

        Args:
            name: Preset name

        Returns:
            Preset dictionary
        """
        if name in BUILTIN_PRESETS:
            return BUILTIN_PRESETS[name]
        path = self._custom_files().get(name)
        if path is None:
            raise PresetError(f"Preset not found: {name}")
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f) if path.suffix == ".json" else yaml.safe_load(f)
        return self.validate(data, name)

    @staticmethod
    def validate(data: Any, name: str) -> Dict[str, Any]:
        if not isinstance(data, dict):
            raise PresetError(f"Preset {name} must be a mapping")
        if data.get("command") not in PRESET_COMMANDS:
            raise PresetError(f"Preset {name} names an unknown command: {data.get('command')}")
        if not isinstance(data.get("args", {}), dict):
            raise PresetError(f"Preset {name}: args must be a mapping")
        data.setdefault("name", name)
        data.setdefault("description", "")
        data.setdefault("args", {})
        return data

    def save_preset(self, name: str, description: str, command: str, args: Dict[str, Any]):
        """
        Save a custom preset

        Args:
            name: Preset name
            description: Preset description
            command: CLI command the preset runs
            args: Keyword arguments for the command
        """
        if name in BUILTIN_PRESETS:
            raise PresetError(f"Cannot overwrite built-in preset: {name}")
        data = self.validate({"name": name, "description": description,
                              "command": command, "args": dict(args)}, name)
        self.preset_dir.mkdir(parents=True, exist_ok=True)
        with open(self.preset_dir / f"{name}.json", 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=2)

    def delete_preset(self, name: str):
        """
        Delete a custom preset

        Args:
            name: Preset name
        """
        if name in BUILTIN_PRESETS:
            raise PresetError(f"Cannot delete built-in preset: {name}")
        path = self._custom_files().get(name)
        if path is None:
            raise PresetError(f"Preset not found: {name}")
        path.unlink()

    def show_preset(self, name: str) -> str:
        """
        Show preset details as formatted string

        Args:
            name: Preset name

        Returns:
            Formatted preset information
        """
        preset = self.get_preset(name)
        lines = [
            f"Preset: {preset['name']}",
            f"Description: {preset['description']}",
            f"Command: {preset['command']}",
            "",
            "Arguments:",
        ]
        for key, value in sorted(preset['args'].items()):
            lines.append(f"  {key}: {value}")
        return "\n".join(lines)
