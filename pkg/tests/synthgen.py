"""Deterministic generator for a synthetic 100-file project."""

from __future__ import annotations

import random
from pathlib import Path

N_MODELS = 25
N_VIEWS = 15
N_SERIALIZERS = 10
N_HELPERS = 3
N_PACKAGES = 4  # one __init__.py per package
N_FILLER = 100 - (N_MODELS + N_VIEWS + N_SERIALIZERS + N_HELPERS + N_PACKAGES)


def generate_project(root: Path, seed: int = 20241) -> int:
    """Write a synthetic Django-style project under ``root``.

    Returns the number of source files written; the layout and contents are
    a pure function of the seed.
    """
    rng = random.Random(seed)
    for package in ("models", "views", "serializers", "lib"):
        (root / package).mkdir(parents=True, exist_ok=True)
        (root / package / "__init__.py").write_text("")
    written = N_PACKAGES

    model_names = [f"Model{i:02d}" for i in range(N_MODELS)]
    for i, name in enumerate(model_names):
        lines = [
            "from django.db import models",
            "",
            "",
            f"class {name}(models.Model):",
            "    name = models.CharField(max_length=64)",
        ]
        if i >= 5 and rng.random() < 0.4:
            target = model_names[rng.randrange(i)]
            lines.append(
                f"    parent = models.ForeignKey('{target}', on_delete=models.CASCADE)"
            )
        (root / "models" / f"{name}.py").write_text("\n".join(lines) + "\n")
    written += N_MODELS

    serializer_names = [f"Serializer{i:02d}" for i in range(N_SERIALIZERS)]
    for name in serializer_names:
        text = (
            "from rest_framework import serializers\n\n\n"
            f"class {name}(serializers.Serializer):\n"
            "    name = serializers.CharField()\n"
        )
        (root / "serializers" / f"{name}.py").write_text(text)
    written += N_SERIALIZERS

    helper_names = [f"Helper{i}" for i in range(N_HELPERS)]
    for name in helper_names:
        text = f"class {name}:\n    def run(self):\n        return None\n"
        (root / "lib" / f"{name}.py").write_text(text)
    written += N_HELPERS

    for v in range(N_VIEWS):
        picked = rng.sample(model_names, rng.randint(2, 3))
        serializer = rng.choice(serializer_names)
        imports = ["from rest_framework.viewsets import ModelViewSet"]
        imports += [f"from ..models.{m} import {m}" for m in picked]
        imports.append(f"from ..serializers.{serializer} import {serializer}")
        body = [
            f"class View{v:02d}(ModelViewSet):",
            f"    queryset = {picked[0]}.objects.all()",
            f"    serializer_class = {serializer}",
            "",
            "    def list(self, request):",
            f"        return {serializer}({picked[0]}.objects.all(), many=True)",
        ]
        for j, m in enumerate(picked[1:], start=1):
            for k in range(rng.randint(1, 3)):
                body.append(f"        extra_{j}_{k} = {m}.objects.filter(flag={k})")
        if rng.random() < 0.3:
            helper = rng.choice(helper_names)
            imports.append(f"from ..lib.{helper} import {helper}")
            body.append(f"        aide = {helper}().run()")
            body.append(f"        probe = {helper}.run")
        (root / "views" / f"View{v:02d}.py").write_text(
            "\n".join(imports) + "\n\n\n" + "\n".join(body) + "\n"
        )
    written += N_VIEWS

    conf = root / "conf"
    conf.mkdir(exist_ok=True)
    for i in range(N_FILLER):
        text = (
            f"SETTING_{i:02d} = {rng.randrange(1000)}\n\n\n"
            f"def helper_{i:02d}(value):\n"
            f"    return value + {rng.randrange(10)}\n"
        )
        (conf / f"conf{i:02d}.py").write_text(text)
    written += N_FILLER
    return written
