"""Static scan of a project tree: classes, imports, call counts, relations.

The scan recognizes a deliberately small set of constructs: top-level
imports, top-level class definitions, attribute/call expressions rooted at
an imported name or a same-file class, and relation field declarations
(``ForeignKey`` and friends). Anything else is ignored.
"""

from __future__ import annotations

import ast
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

from .errors import FatalError
from .paths import ModulePath, class_path

SOURCE_SUFFIX = ".py"

DEFAULT_IGNORE_DIRS = ("migrations", "tests", "venv", "__pycache__")
DEFAULT_MODEL_BASES = ("Model",)
DEFAULT_VIEW_BASES = ("ModelViewSet",)

_RELATION_CALLS = {
    "ForeignKey": "foreign_key",
    "OneToOneField": "one_to_one",
    "ManyToManyField": "many_to_many",
}


class Kind(str, Enum):
    MODEL = "model"
    VIEW = "view"
    SERIALIZER = "serializer"
    OTHER = "other"


class RelationKind(str, Enum):
    FOREIGN_KEY = "foreign_key"
    ONE_TO_ONE = "one_to_one"
    MANY_TO_MANY = "many_to_many"


@dataclass(frozen=True)
class ScanConfig:
    """Scanner settings; base-name lists extend the built-in defaults."""

    model_bases: tuple[str, ...] = DEFAULT_MODEL_BASES
    view_bases: tuple[str, ...] = DEFAULT_VIEW_BASES
    ignore_dirs: tuple[str, ...] = DEFAULT_IGNORE_DIRS

    @classmethod
    def from_toml(cls, path: Path) -> "ScanConfig":
        try:
            import tomllib
        except ModuleNotFoundError:
            import tomli as tomllib

        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except OSError as exc:
            raise FatalError(f"cannot read config file: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise FatalError(f"invalid config file {path}: {exc}") from exc
        section = data.get("scanner", {})
        if not isinstance(section, dict):
            raise FatalError("config [scanner] must be a table")
        extra_models = section.get("extra_model_bases", [])
        extra_views = section.get("extra_view_bases", [])
        ignore = section.get("ignore_dirs")
        for name, value in (
            ("extra_model_bases", extra_models),
            ("extra_view_bases", extra_views),
            ("ignore_dirs", ignore),
        ):
            if value is not None and not (
                isinstance(value, list) and all(isinstance(v, str) for v in value)
            ):
                raise FatalError(f"config scanner.{name} must be a list of strings")
        return cls(
            model_bases=DEFAULT_MODEL_BASES + tuple(extra_models),
            view_bases=DEFAULT_VIEW_BASES + tuple(extra_views),
            ignore_dirs=tuple(ignore) if ignore is not None else DEFAULT_IGNORE_DIRS,
        )


@dataclass(frozen=True)
class ClassFact:
    """A top-level class found in a file.

    ``refs`` lists the project-internal targets the class body mentions at
    all (including bare name references that never count as calls); it is
    what import attribution works from.
    """

    name: str
    module: ModulePath
    bases: tuple[str, ...]
    kind: Kind = Kind.OTHER
    refs: tuple[ModulePath, ...] = ()

    @property
    def node_path(self) -> ModulePath:
        return class_path(self.module, self.name)


@dataclass(frozen=True)
class ImportFact:
    importer: ModulePath
    imported: ModulePath
    alias: str
    external: bool = False


@dataclass(frozen=True)
class CallFact:
    """Counted attribute/call occurrences from one class toward one target."""

    caller: ModulePath
    callee_alias: str
    count: int
    target: ModulePath


@dataclass(frozen=True)
class RelationFact:
    source_model: ModulePath
    target_model: ModulePath
    relation_kind: RelationKind


@dataclass(frozen=True)
class FileRecord:
    path: str
    module: ModulePath
    status: str  # "parsed" or "skipped"
    note: str | None = None


@dataclass(frozen=True)
class Totals:
    files: int
    views: int
    models: int


@dataclass
class ProjectFacts:
    files: list[FileRecord] = field(default_factory=list)
    classes: list[ClassFact] = field(default_factory=list)
    imports: list[ImportFact] = field(default_factory=list)
    calls: list[CallFact] = field(default_factory=list)
    relations: list[RelationFact] = field(default_factory=list)
    totals: Totals = Totals(0, 0, 0)
    warnings: list[str] = field(default_factory=list)

    @property
    def skipped(self) -> list[FileRecord]:
        return [f for f in self.files if f.status == "skipped"]


@dataclass
class FileFacts:
    """Result of parsing a single file; string relation targets are still raw."""

    module: ModulePath
    classes: list[ClassFact] = field(default_factory=list)
    imports: list[ImportFact] = field(default_factory=list)
    calls: list[CallFact] = field(default_factory=list)
    relations: list[RelationFact] = field(default_factory=list)
    string_relations: list[tuple[ModulePath, str, RelationKind]] = field(
        default_factory=list
    )
    warnings: list[str] = field(default_factory=list)


def _resolve_relative(
    package: tuple[str, ...], level: int, module: str | None
) -> tuple[str, ...] | None:
    """Resolve a ``from ..x import y`` module reference against a package."""
    if level - 1 > len(package):
        return None
    base = package[: len(package) - (level - 1)] if level > 1 else package
    tail = tuple(module.split(".")) if module else ()
    return base + tail


def _is_internal(target: tuple[str, ...], known: set[ModulePath] | None) -> bool:
    if known is None:
        return False
    probe = ModulePath(target) if target else None
    return probe is not None and probe in known


class _ChainCounter:
    """Counts attribute/call expressions rooted at tracked names.

    A chain such as ``Item.objects.all()`` counts once for ``Item``; bare
    name references count zero but are remembered as references.
    """

    def __init__(self, targets: dict[str, ModulePath]) -> None:
        self.targets = targets
        self.counts: dict[str, int] = {}
        self.referenced: set[str] = set()

    def visit(self, node: ast.AST) -> None:
        if isinstance(node, (ast.Attribute, ast.Call)):
            root = node
            while isinstance(root, (ast.Attribute, ast.Call)):
                root = root.value if isinstance(root, ast.Attribute) else root.func
            if isinstance(root, ast.Name) and root.id in self.targets:
                self.counts[root.id] = self.counts.get(root.id, 0) + 1
                self.referenced.add(root.id)
                self._visit_off_spine(node)
                return
        if isinstance(node, ast.Name) and node.id in self.targets:
            self.referenced.add(node.id)
        for child in ast.iter_child_nodes(node):
            self.visit(child)

    def _visit_off_spine(self, node: ast.AST) -> None:
        # Walk down the counted chain, descending only into arguments.
        while isinstance(node, (ast.Attribute, ast.Call)):
            if isinstance(node, ast.Call):
                for arg in node.args:
                    self.visit(arg)
                for kw in node.keywords:
                    self.visit(kw.value)
                node = node.func
            else:
                node = node.value


def _base_to_str(node: ast.expr) -> str:
    try:
        return ast.unparse(node)
    except Exception:  # pragma: no cover - unparse handles all real bases
        return "<unknown>"


def _relation_kind(func: ast.expr) -> RelationKind | None:
    if isinstance(func, ast.Name):
        name = func.id
    elif isinstance(func, ast.Attribute):
        name = func.attr
    else:
        return None
    kind = _RELATION_CALLS.get(name)
    return RelationKind(kind) if kind else None


def _relation_target(call: ast.Call) -> ast.expr | None:
    if call.args:
        return call.args[0]
    for kw in call.keywords:
        if kw.arg == "to":
            return kw.value
    return None


def parse_file(
    text: str,
    module: ModulePath,
    known_modules: set[ModulePath] | None = None,
    is_package: bool = False,
) -> FileFacts:
    """Extract facts from one source file.

    ``known_modules`` is the set of project module paths used to decide
    whether an absolute import is internal; relative imports are always
    internal. Raises ``SyntaxError`` on files the parser rejects; the
    project scan records those as skipped.
    """
    tree = ast.parse(text)
    facts = FileFacts(module=module)
    package = module.segments if is_package else module.segments[:-1]

    alias_targets: dict[str, ModulePath] = {}
    alias_external: dict[str, bool] = {}
    seen_targets: dict[ModulePath, str] = {}

    def record_import(alias: str, target: tuple[str, ...], external: bool) -> None:
        try:
            imported = ModulePath(target)
        except ValueError:
            facts.warnings.append(
                f"{module}: import target {'.'.join(target)!r} is not a module path"
            )
            return
        alias_targets[alias] = imported
        alias_external[alias] = external
        if imported not in seen_targets:
            seen_targets[imported] = alias
            facts.imports.append(
                ImportFact(importer=module, imported=imported, alias=alias, external=external)
            )

    for stmt in tree.body:
        if isinstance(stmt, ast.Import):
            for name in stmt.names:
                target = tuple(name.name.split("."))
                bound = name.asname or target[0]
                resolved = target if name.asname else target[:1]
                record_import(bound, resolved, not _is_internal(resolved, known_modules))
        elif isinstance(stmt, ast.ImportFrom):
            if stmt.level:
                base = _resolve_relative(package, stmt.level, stmt.module)
                if base is None:
                    facts.warnings.append(
                        f"{module}: relative import escapes the project root"
                    )
                    continue
                base_internal = True
            else:
                base = tuple((stmt.module or "").split("."))
                base_internal = _is_internal(base, known_modules)
            for name in stmt.names:
                if name.name == "*":
                    facts.warnings.append(f"{module}: star import ignored")
                    continue
                bound = name.asname or name.name
                target = base + (name.name,)
                # Collapse module/class duplication: from models.Item import Item.
                if len(target) >= 2 and target[-1] == target[-2]:
                    target = target[:-1]
                internal = base_internal or (
                    known_modules is not None
                    and stmt.level == 0
                    and _is_internal(target, known_modules)
                )
                record_import(bound, target, not internal)

    class_nodes = [s for s in tree.body if isinstance(s, ast.ClassDef)]
    local_classes = {c.name: class_path(module, c.name) for c in class_nodes}

    internal_targets = {
        alias: target
        for alias, target in alias_targets.items()
        if not alias_external[alias]
    }
    trackable = dict(internal_targets)
    trackable.update(local_classes)

    by_name: dict[str, ClassFact] = {}
    for node in class_nodes:
        counter = _ChainCounter(trackable)
        for stmt in node.body:
            counter.visit(stmt)
        bases = tuple(_base_to_str(b) for b in node.bases)
        # Base names are references too; they anchor inheritance edges.
        for base in bases:
            root = base.split(".", 1)[0]
            if root in trackable:
                counter.referenced.add(root)
        own = class_path(module, node.name)
        counted: dict[ModulePath, int] = {}
        rep_alias: dict[ModulePath, str] = {}
        for alias, count in counter.counts.items():
            target = trackable[alias]
            counted[target] = counted.get(target, 0) + count
            rep_alias.setdefault(target, alias)
        refs = {trackable[alias] for alias in counter.referenced}
        refs.discard(own)
        fact = ClassFact(
            name=node.name,
            module=module,
            bases=bases,
            refs=tuple(sorted(refs)),
        )
        if node.name in by_name:
            facts.warnings.append(
                f"{module}: class {node.name} redefined; keeping the last definition"
            )
            facts.classes = [c for c in facts.classes if c.name != node.name]
            facts.calls = [c for c in facts.calls if c.caller != own]
            facts.relations = [r for r in facts.relations if r.source_model != own]
            facts.string_relations = [r for r in facts.string_relations if r[0] != own]
        by_name[node.name] = fact
        facts.classes.append(fact)
        for target in sorted(counted):
            if target == own:
                continue
            facts.calls.append(
                CallFact(
                    caller=own,
                    callee_alias=rep_alias[target],
                    count=counted[target],
                    target=target,
                )
            )
        _collect_relations(node, own, trackable, facts)

    return facts


def _collect_relations(
    node: ast.ClassDef,
    owner: ModulePath,
    trackable: dict[str, ModulePath],
    facts: FileFacts,
) -> None:
    for stmt in node.body:
        if isinstance(stmt, ast.Assign):
            value = stmt.value
        elif isinstance(stmt, ast.AnnAssign):
            value = stmt.value
        else:
            continue
        if not isinstance(value, ast.Call):
            continue
        kind = _relation_kind(value.func)
        if kind is None:
            continue
        target = _relation_target(value)
        if target is None:
            facts.warnings.append(f"{owner}: relation field without a target")
            continue
        if isinstance(target, ast.Constant) and isinstance(target.value, str):
            raw = target.value
            if raw == "self":
                facts.relations.append(RelationFact(owner, owner, kind))
            else:
                facts.string_relations.append((owner, raw.split(".")[-1], kind))
        elif isinstance(target, ast.Name):
            resolved = trackable.get(target.id)
            if resolved is None:
                facts.warnings.append(
                    f"{owner}: relation target {target.id!r} is not a known class"
                )
            else:
                facts.relations.append(RelationFact(owner, resolved, kind))
        else:
            facts.warnings.append(f"{owner}: unsupported relation target expression")


def _discover_files(
    root: Path, ignore_dirs: tuple[str, ...]
) -> tuple[list[tuple[Path, ModulePath, bool]], list[str]]:
    ignored = set(ignore_dirs)
    found: list[tuple[Path, ModulePath, bool]] = []
    unmappable: list[str] = []
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames[:] = sorted(
            d for d in dirnames if d not in ignored and not d.startswith(".")
        )
        for filename in sorted(filenames):
            if not filename.endswith(SOURCE_SUFFIX):
                continue
            path = Path(dirpath) / filename
            rel = path.relative_to(root)
            parts = list(rel.parts[:-1])
            stem = filename[: -len(SOURCE_SUFFIX)]
            is_package = stem == "__init__"
            if not is_package:
                parts.append(stem)
            if not parts:
                parts = [stem]  # a root-level __init__.py keeps its own name
                is_package = False
            try:
                module = ModulePath(tuple(parts))
            except ValueError:
                unmappable.append(rel.as_posix())
                continue
            found.append((path, module, is_package))
    found.sort(key=lambda item: item[1])
    return found, unmappable


def scan_project(
    root: str | Path,
    config: ScanConfig | None = None,
    threads: int = 1,
) -> ProjectFacts:
    """Scan a project directory and return aggregated, classified facts.

    Files are parsed independently (optionally on a thread pool) and merged
    in module-path order, so the result does not depend on scan order.
    """
    root = Path(root)
    if not root.is_dir():
        raise FatalError(f"project directory not found: {root}")
    config = config or ScanConfig()

    entries, unmappable = _discover_files(root, config.ignore_dirs)
    known = {module for _, module, _ in entries}
    for _, module, _ in entries:
        parent = module.parent()
        while parent is not None:
            known.add(parent)
            parent = parent.parent()

    def parse_one(entry: tuple[Path, ModulePath, bool]):
        path, module, is_package = entry
        rel = path.relative_to(root).as_posix()
        try:
            text = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            return FileRecord(rel, module, "skipped", f"unreadable: {exc}"), None
        try:
            parsed = parse_file(text, module, known_modules=known, is_package=is_package)
        except SyntaxError as exc:
            return FileRecord(rel, module, "skipped", f"parse error: {exc.msg}"), None
        return FileRecord(rel, module, "parsed"), parsed

    if threads > 1 and len(entries) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(parse_one, entries))
    else:
        results = [parse_one(entry) for entry in entries]

    facts = ProjectFacts()
    for rel in unmappable:
        facts.warnings.append(f"skipped {rel}: path is not a valid module path")
    pending_strings: list[tuple[ModulePath, str, RelationKind]] = []
    for record, parsed in results:
        facts.files.append(record)
        if record.status == "skipped":
            facts.warnings.append(f"skipped {record.path}: {record.note}")
            continue
        assert parsed is not None
        facts.classes.extend(parsed.classes)
        facts.imports.extend(parsed.imports)
        facts.calls.extend(parsed.calls)
        facts.relations.extend(parsed.relations)
        pending_strings.extend(parsed.string_relations)
        facts.warnings.extend(parsed.warnings)

    _resolve_string_relations(facts, pending_strings)
    classify_classes(facts, config)
    _validate_relations(facts)
    facts.totals = Totals(
        files=len(facts.files),
        views=sum(1 for c in facts.classes if c.kind is Kind.VIEW),
        models=sum(1 for c in facts.classes if c.kind is Kind.MODEL),
    )
    return facts


def _resolve_string_relations(
    facts: ProjectFacts, pending: list[tuple[ModulePath, str, RelationKind]]
) -> None:
    by_name: dict[str, list[ModulePath]] = {}
    for cls in facts.classes:
        by_name.setdefault(cls.name, []).append(cls.node_path)
    for owner, name, kind in pending:
        candidates = by_name.get(name, [])
        if not candidates:
            facts.warnings.append(f"{owner}: relation target {name!r} not found")
        elif len(candidates) > 1:
            facts.warnings.append(
                f"{owner}: relation target {name!r} is ambiguous "
                f"({', '.join(str(c) for c in sorted(candidates))})"
            )
        else:
            facts.relations.append(RelationFact(owner, candidates[0], kind))


def _validate_relations(facts: ProjectFacts) -> None:
    kinds = {c.node_path: c.kind for c in facts.classes}
    kept: list[RelationFact] = []
    for rel in facts.relations:
        if kinds.get(rel.source_model) is Kind.MODEL and kinds.get(rel.target_model) is Kind.MODEL:
            kept.append(rel)
        else:
            facts.warnings.append(
                f"relation {rel.source_model} -> {rel.target_model} dropped: "
                "both endpoints must be model classes"
            )
    facts.relations = kept


def classify_classes(facts: ProjectFacts, config: ScanConfig | None = None) -> ProjectFacts:
    """Assign a kind to every class by resolving base names transitively.

    Project-internal inheritance chains are followed; external bases match
    against the configured model/view base-name lists by their final dotted
    segment. Classes on an inheritance cycle become ``other``.
    """
    config = config or ScanConfig()
    model_bases = set(config.model_bases)
    view_bases = set(config.view_bases)
    by_path = {c.node_path: c for c in facts.classes}
    alias_maps: dict[ModulePath, dict[str, ModulePath]] = {}
    for imp in facts.imports:
        if not imp.external:
            alias_maps.setdefault(imp.importer, {})[imp.alias] = imp.imported
    local_by_module: dict[ModulePath, dict[str, ModulePath]] = {}
    for cls in facts.classes:
        local_by_module.setdefault(cls.module, {})[cls.name] = cls.node_path

    resolved: dict[ModulePath, Kind] = {}
    cycle_members: set[ModulePath] = set()

    def base_target(cls: ClassFact, base: str) -> ModulePath | None:
        head, _, rest = base.partition(".")
        locals_ = local_by_module.get(cls.module, {})
        aliases = alias_maps.get(cls.module, {})
        if not rest and head in locals_:
            return locals_[head]
        if head in aliases:
            target = aliases[head]
            if rest:
                target = ModulePath(target.segments + tuple(rest.split(".")))
            if len(target.segments) >= 2 and target.segments[-1] == target.segments[-2]:
                target = ModulePath(target.segments[:-1])
            return target if target in by_path else None
        return None

    def resolve(path: ModulePath, visiting: tuple[ModulePath, ...]) -> Kind:
        if path in resolved:
            return resolved[path]
        if path in visiting:
            cycle_members.update(visiting[visiting.index(path):])
            return Kind.OTHER
        cls = by_path[path]
        kinds: list[Kind] = []
        for base in cls.bases:
            target = base_target(cls, base)
            if target is not None:
                kinds.append(resolve(target, visiting + (path,)))
            else:
                last = base.split(".")[-1]
                if last in model_bases:
                    kinds.append(Kind.MODEL)
                elif last in view_bases:
                    kinds.append(Kind.VIEW)
        if path in cycle_members:
            return Kind.OTHER
        if Kind.MODEL in kinds:
            kind = Kind.MODEL
        elif Kind.VIEW in kinds:
            kind = Kind.VIEW
        elif "Serializer" in cls.name or any("Serializer" in b for b in cls.bases) or Kind.SERIALIZER in kinds:
            kind = Kind.SERIALIZER
        else:
            kind = Kind.OTHER
        resolved[path] = kind
        return kind

    for path in sorted(by_path):
        resolve(path, ())
    for path in sorted(cycle_members):
        resolved[path] = Kind.OTHER
        facts.warnings.append(f"inheritance cycle involving {path}; marked other")

    facts.classes = [replace(c, kind=resolved[c.node_path]) for c in facts.classes]
    facts.totals = Totals(
        files=len(facts.files),
        views=sum(1 for c in facts.classes if c.kind is Kind.VIEW),
        models=sum(1 for c in facts.classes if c.kind is Kind.MODEL),
    )
    return facts
