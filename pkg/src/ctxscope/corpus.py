"""Deterministic synthetic enterprise corpus for a fictitious AI-companion company.

The generator is seeded template + vocabulary-pool synthesis: every item is
produced from one department's term pool (two latent themes per department),
so topic modeling downstream has real structure to recover. An LLM-backed
content provider can be plugged in behind ``ContentProvider`` but the default
stays offline and byte-reproducible.

Duplicate employee names are injected deliberately at a configurable rate so
the "several employees share one name" failure mode can be reproduced on
demand.
"""

import json
import math
import random
from dataclasses import dataclass, field, replace
from datetime import date, timedelta
from typing import Callable, Optional

from .errors import ConfigError, InputError, ParseError

SCHEMA_VERSION = 1

DEPARTMENTS = ("ProductDesign", "Marketing", "SoftwareDev", "UserResearch", "Operations")
KINDS = ("email", "file", "calendar_event", "chat_message")

DEFAULT_KIND_MIX = {
    "email": 0.40,
    "file": 0.30,
    "calendar_event": 0.15,
    "chat_message": 0.15,
}

# Department vocabularies are pairwise disjoint so generated items can be
# attributed back to their pool by a plain string scan.
DEPARTMENT_TERMS = {
    "ProductDesign": (
        "design", "prototype", "wireframe", "persona", "mockup", "interface",
        "interaction", "accessibility", "typography", "palette", "storyboard",
        "avatar", "animation", "layout", "component",
    ),
    "Marketing": (
        "marketing", "campaign", "launch", "brand", "audience", "engagement",
        "social", "channel", "messaging", "promotion", "awareness",
        "conversion", "newsletter", "outreach", "creative",
    ),
    "SoftwareDev": (
        "backend", "deployment", "latency", "pipeline", "release", "refactor",
        "database", "inference", "api", "regression", "incident", "rollout",
        "sdk", "runtime", "memory",
    ),
    "UserResearch": (
        "feedback", "survey", "interview", "participant", "insight",
        "usability", "transcript", "sentiment", "respondent", "finding",
        "recruitment", "diary", "rating", "cohort", "synthesis",
    ),
    "Operations": (
        "procurement", "vendor", "invoice", "budget", "compliance", "payroll",
        "facilities", "contract", "audit", "headcount", "policy", "travel",
        "expense", "renewal", "security",
    ),
}

# Two latent themes per department: (theme name, project names, biased terms).
# Biased terms make items of one theme share more vocabulary with each other
# than with the sibling theme, so a k=7 clustering can split departments.
DEPARTMENT_THEMES = {
    "ProductDesign": (
        ("companion persona design",
         ("Juno persona refresh", "expressive avatar set", "voice moodboard"),
         ("persona", "avatar", "animation", "storyboard", "palette", "typography")),
        ("onboarding flow design",
         ("onboarding redesign", "first-run experience", "settings revamp"),
         ("wireframe", "mockup", "interface", "interaction", "layout", "component", "accessibility", "prototype", "design")),
    ),
    "Marketing": (
        ("launch campaign",
         ("spring launch", "Juno 2.0 debut plan", "holiday push"),
         ("campaign", "launch", "promotion", "conversion", "channel", "messaging", "marketing")),
        ("brand and social",
         ("brand refresh", "community stories", "creator collab"),
         ("brand", "social", "audience", "engagement", "awareness", "newsletter", "outreach", "creative")),
    ),
    "SoftwareDev": (
        ("platform backend",
         ("sync service hardening", "storage migration", "billing integration"),
         ("backend", "database", "api", "deployment", "incident", "rollout", "pipeline")),
        ("dialogue runtime",
         ("dialogue engine tuning", "edge inference", "latency sprint"),
         ("inference", "latency", "runtime", "memory", "sdk", "release", "refactor", "regression")),
    ),
    "UserResearch": (
        ("user feedback analysis",
         ("quarterly feedback review", "store review mining", "NPS deep dive"),
         ("feedback", "survey", "sentiment", "rating", "respondent", "synthesis", "insight")),
        ("usability studies",
         ("diary study wave 3", "onboarding usability round", "trust interview study"),
         ("usability", "interview", "participant", "transcript", "recruitment", "diary", "cohort", "finding")),
    ),
    "Operations": (
        ("vendor and procurement",
         ("vendor consolidation", "annual contract renewals", "GPU capacity order"),
         ("procurement", "vendor", "invoice", "contract", "renewal", "audit", "expense", "budget")),
        ("people and facilities",
         ("office move", "travel policy update", "badge system refresh"),
         ("payroll", "facilities", "headcount", "policy", "travel", "compliance", "security")),
    ),
}

DEPARTMENT_LABELS = {
    "ProductDesign": "Product Design",
    "Marketing": "Marketing",
    "SoftwareDev": "Software Development",
    "UserResearch": "User Research",
    "Operations": "Operations",
}

DEPARTMENT_TITLES = {
    "ProductDesign": ("Product Designer", "Design Lead", "UX Designer", "Visual Designer"),
    "Marketing": ("Marketing Manager", "Growth Marketer", "Brand Strategist", "Content Marketer"),
    "SoftwareDev": ("Software Engineer", "Backend Engineer", "ML Engineer", "Engineering Manager"),
    "UserResearch": ("User Researcher", "Research Lead", "Research Analyst", "Insights Manager"),
    "Operations": ("Operations Manager", "Procurement Specialist", "People Partner", "Facilities Coordinator"),
}

FIRST_NAMES = (
    "Aisha", "Liam", "Maya", "Omar", "Priya", "Wei", "Sofia", "Mateo", "Amara", "Noah",
    "Yuki", "Ibrahim", "Elena", "Kwame", "Ingrid", "Ravi", "Fatima", "Lucas", "Hana", "Diego",
    "Nadia", "Finn", "Zora", "Tomas", "Leila", "Arjun", "Greta", "Samuel", "Mei", "Viktor",
    "Anya", "Jamal", "Clara", "Hiro", "Bianca", "Emeka", "Astrid", "Rosa", "Dmitri", "Kira",
    "Oscar", "Tara", "Malik", "Ines", "Jonas", "Sana", "Felix", "Carmen", "Tariq", "Lena",
    "Marco", "Deepa", "Stefan", "Alma", "Kenji", "Noor", "Pablo", "Silvia", "Andrei", "Jade",
    "Hassan", "Freya", "Dario", "Mira",
)

LAST_NAMES = (
    "Patel", "Johnson", "Chen", "Haddad", "Kowalski", "Okafor", "Lindqvist", "Moreau", "Tanaka", "Alvarez",
    "Novak", "Mensah", "Petrov", "Silva", "Khan", "Berg", "Rossi", "Nakamura", "Diallo", "Kim",
    "Fischer", "Costa", "Ahmed", "Laurent", "Olsen", "Iyer", "Vargas", "Weber", "Sato", "Nielsen",
    "Rahman", "Dubois", "Castro", "Yamamoto", "Abara", "Svensson", "Ricci", "Haugen", "Sharma", "Ortiz",
    "Keller", "Banda", "Ivanov", "Morel", "Tran", "Eriksen", "Mbeki", "Ferreira", "Zhou", "Lund",
    "Navarro", "Osei", "Becker", "Marino", "Das", "Holm", "Reyes", "Antov", "Ueda", "Bauer",
    "Camara", "Voss", "Pires", "Gupta",
)

BACKGROUNDS = (
    "consumer apps", "enterprise software", "behavioral science", "visual arts",
    "developer tools", "hospitality", "telecom", "game studios", "public sector",
    "health tech", "education", "logistics",
)

# Sentence pools are written in a per-department voice. Apart from a
# department's own vocabulary, no pool may use a term reserved by another
# department, so shared phrasing never leaks topical signal across pools.
DEPARTMENT_VOICES = {
    "ProductDesign": {
        "openers": (
            "Design review notes for {project}: iterating on the {a}.",
            "Sharing the latest {a} exploration for {project}.",
            "Crit notes on the {a} direction for {project}.",
        ),
        "middles": (
            "The {b} still clashes with the {c} spacing, so another pass is needed.",
            "Handoff specs for the {b} and the {c} are in the shared folder.",
            "We simplified the {b} so the {c} reads cleaner at small sizes.",
        ),
        "closers": (
            "Please annotate the {d} frames and comment on the {e} variant.",
            "Will polish the {d} and the {e} before the design sync.",
            "Open question: should the {e} follow the new {d} guidelines.",
        ),
        "listing": "Crit board: {c}, {d}, {e}.",
    },
    "Marketing": {
        "openers": (
            "Marketing recap for {project}: the {a} numbers are trending up.",
            "Planning note for {project}: drafting the {a} calendar.",
            "Heads up on {project}: the {a} assets ship this week.",
        ),
        "middles": (
            "The {b} copy tested better than the {c} variant last sprint.",
            "We are pacing the {b} spend against the {c} forecast.",
            "Agency notes on the {b} and the {c} are due Friday.",
        ),
        "closers": (
            "Need sign off on the {d} plan and the {e} slot.",
            "Will refresh the {d} lines and the {e} visuals tomorrow.",
            "Holding the {d} send until the {e} numbers land.",
        ),
        "listing": "Campaign tracker: {c}, {d}, {e}.",
    },
    "SoftwareDev": {
        "openers": (
            "Deploy notes for {project}: the {a} change is staged.",
            "Eng status on {project}: profiling the {a} path.",
            "Postmortem snippet for {project}: the {a} alert fired twice.",
        ),
        "middles": (
            "The {b} migration unblocked the {c} work after the schema fix.",
            "Added retries around the {b} calls and the {c} errors dropped.",
            "Perf run shows the {b} beating the {c} baseline by twelve percent.",
        ),
        "closers": (
            "Will cut the {d} branch once the {e} tests go green.",
            "Code review for the {d} and the {e} is still open.",
            "Tracking the {d} cleanup and the {e} flag removal next sprint.",
        ),
        "listing": "Sprint board: {c}, {d}, {e}.",
    },
    "UserResearch": {
        "openers": (
            "Research digest for {project}: coding the {a} responses.",
            "Study update on {project}: synthesis of the {a} sessions started.",
            "Fieldwork note for {project}: the {a} signals are consistent.",
        ),
        "middles": (
            "Twelve of twenty people mentioned the {b} before the {c}.",
            "The {b} quotes contradict the {c} scores from last quarter.",
            "We clustered the {b} notes against the {c} themes overnight.",
        ),
        "closers": (
            "Scheduling follow ups to probe the {d} and the {e} further.",
            "Full read out on the {d} and the {e} lands Thursday.",
            "Flagging the {d} gap and the {e} confusion for the roadmap.",
        ),
        "listing": "Theme tags: {c}, {d}, {e}.",
    },
    "Operations": {
        "openers": (
            "Ops update for {project}: the {a} queue is clear.",
            "Reminder on {project}: the {a} forms are due Monday.",
            "Process note for {project}: the {a} step moved to self serve.",
        ),
        "middles": (
            "Finance flagged the {b} totals against the {c} ceiling.",
            "The {b} paperwork cleared and the {c} approval is pending.",
            "We reconciled the {b} records with the {c} ledger this morning.",
        ),
        "closers": (
            "Routing the {d} request and the {e} exception for approval.",
            "Will archive the {d} files once the {e} review closes.",
            "Escalating the {d} deadline and the {e} shortfall to leads.",
        ),
        "listing": "Tracker: {c}, {d}, {e}.",
    },
}

_WINDOW_START = date(2024, 1, 1)
_WINDOW_DAYS = 366  # one-year window; 2024 is a leap year


@dataclass(frozen=True)
class Employee:
    id: str
    full_name: str
    title: str
    department: str
    profile: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "full_name": self.full_name,
            "title": self.title,
            "department": self.department,
            "profile": self.profile,
        }


@dataclass(frozen=True)
class DataItem:
    id: str
    kind: str
    title: str
    content: str
    participants: tuple[str, ...]
    created_at: str

    def __post_init__(self):
        object.__setattr__(self, "participants", tuple(self.participants))

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "title": self.title,
            "content": self.content,
            "participants": list(self.participants),
            "created_at": self.created_at,
        }


@dataclass
class Corpus:
    employees: list[Employee]
    items: list[DataItem]
    employees_by_id: dict[str, Employee] = field(init=False, repr=False, compare=False)
    items_by_id: dict[str, DataItem] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self.employees_by_id = {e.id: e for e in self.employees}
        self.items_by_id = {i.id: i for i in self.items}


@dataclass(frozen=True)
class GenConfig:
    seed: int
    n_employees: int = 1000
    n_items: int = 10000
    duplicate_name_rate: float = 0.01
    kind_mix: tuple[tuple[str, float], ...] = tuple(sorted(DEFAULT_KIND_MIX.items()))

    def validate(self) -> None:
        if not isinstance(self.seed, int) or abs(self.seed) >= 2**64:
            raise ConfigError(f"seed must be a 64-bit integer, got {self.seed!r}")
        if self.n_employees < 1:
            raise ConfigError(f"n_employees must be >= 1, got {self.n_employees}")
        if self.n_items < 1:
            raise ConfigError(f"n_items must be >= 1, got {self.n_items}")
        if not 0.0 <= self.duplicate_name_rate <= 1.0:
            raise ConfigError(f"duplicate_name_rate must be in [0,1], got {self.duplicate_name_rate}")
        mix = dict(self.kind_mix)
        unknown = sorted(set(mix) - set(KINDS))
        if unknown:
            raise ConfigError(f"unknown kinds in kind_mix: {unknown}")
        if any(not 0.0 <= f <= 1.0 for f in mix.values()):
            raise ConfigError("kind_mix fractions must be in [0,1]")
        if abs(sum(mix.values()) - 1.0) > 1e-9:
            raise ConfigError(f"kind_mix must sum to 1, got {sum(mix.values())}")


# Optional pluggable content source (an LLM-backed one is admissible but
# non-deterministic, so tests always run the template default).
ContentProvider = Callable[[str, str, str, str, list[Employee]], tuple[str, str]]


def _sample_terms(rng: random.Random, department: str, bias_terms: tuple[str, ...]) -> list[str]:
    pool = DEPARTMENT_TERMS[department]
    picked = rng.sample(bias_terms, min(4, len(bias_terms)))
    while len(picked) < 5:
        t = pool[rng.randrange(len(pool))]
        if t not in picked:
            picked.append(t)
    return picked


def _body(rng: random.Random, department: str, theme: str, terms: list[str], project: str) -> str:
    a, b, c, d, e = terms[:5]
    voice = DEPARTMENT_VOICES[department]
    s1 = rng.choice(voice["openers"]).format(a=a, project=project)
    s2 = rng.choice(voice["middles"]).format(b=b, c=c)
    s3 = rng.choice(voice["closers"]).format(d=d, e=e)
    s4 = voice["listing"].format(c=c, d=d, e=e)
    s5 = f"Workstream: {theme}."
    return f"{s1} {s2} {s3} {s4} {s5}"


def _gen_employees(rng: random.Random, n: int) -> list[Employee]:
    combos = [(f, l) for f in FIRST_NAMES for l in LAST_NAMES]
    if n <= len(combos):
        names = rng.sample(combos, n)
    else:
        # Pool exhausted; reuse combinations (natural duplicates accepted).
        names = rng.sample(combos, len(combos))
        names += [combos[rng.randrange(len(combos))] for _ in range(n - len(combos))]
    employees = []
    for i, (first, last) in enumerate(names):
        dept = DEPARTMENTS[i % len(DEPARTMENTS)]
        title = rng.choice(DEPARTMENT_TITLES[dept])
        theme, projects, bias = DEPARTMENT_THEMES[dept][rng.randrange(2)]
        t1, t2 = rng.sample(DEPARTMENT_TERMS[dept], 2)
        profile = (
            f"{title} in {DEPARTMENT_LABELS[dept]} at Solace Labs, the company behind the"
            f" Juno AI companion. Works on {rng.choice(projects)} with a focus on {t1}"
            f" and {t2}. Background in {rng.choice(BACKGROUNDS)}."
        )
        employees.append(Employee(
            id=f"emp-{i + 1:05d}",
            full_name=f"{first} {last}",
            title=title,
            department=dept,
            profile=profile,
        ))
    return employees


def inject_duplicate_names(employees: list[Employee], rate: float, rng: random.Random) -> list[Employee]:
    """Rename floor(rate * n) employees to a name already present.

    Ids, titles and profiles are untouched; rate 0 is a no-op.
    """
    if not 0.0 <= rate <= 1.0:
        raise InputError(f"rate must be in [0,1], got {rate}")
    n = len(employees)
    n_renames = math.floor(rate * n)
    if n_renames == 0 or n < 2:
        return list(employees)
    targets = sorted(rng.sample(range(n), n_renames))
    target_set = set(targets)
    keepers = [i for i in range(n) if i not in target_set]
    out = list(employees)
    for t in targets:
        # Renamed-to names come from employees keeping their original name,
        # so every rename is guaranteed to create a real collision.
        source = keepers[rng.randrange(len(keepers))] if keepers else targets[0]
        out[t] = replace(out[t], full_name=employees[source].full_name)
    return out


def _allocate_kinds(n_items: int, kind_mix: dict[str, float]) -> list[str]:
    # Largest-remainder allocation: realized counts are exact, not sampled.
    quotas = [(kind, n_items * kind_mix.get(kind, 0.0)) for kind in KINDS]
    counts = {kind: math.floor(q) for kind, q in quotas}
    short = n_items - sum(counts.values())
    by_remainder = sorted(quotas, key=lambda kq: (-(kq[1] - math.floor(kq[1])), kq[0]))
    for kind, _ in by_remainder[:short]:
        counts[kind] += 1
    kinds: list[str] = []
    for kind in KINDS:
        kinds.extend([kind] * counts[kind])
    return kinds


def _pick_others(rng: random.Random, n_employees: int, home: int, count: int) -> list[int]:
    others = []
    while len(others) < count:
        j = rng.randrange(n_employees)
        if j != home and j not in others:
            others.append(j)
    return others


def _gen_item(rng: random.Random, idx: int, kind: str, employees: list[Employee]) -> DataItem:
    n = len(employees)
    home = rng.randrange(n)
    owner = employees[home]
    dept = owner.department
    theme_name, projects, bias = DEPARTMENT_THEMES[dept][rng.randrange(2)]
    project = rng.choice(projects)
    terms = _sample_terms(rng, dept, bias)
    body = _body(rng, dept, theme_name, terms, project)
    created = (_WINDOW_START + timedelta(days=rng.randrange(_WINDOW_DAYS))).isoformat()

    if kind == "email":
        others = _pick_others(rng, n, home, rng.randrange(1, 3)) if n > 1 else []
        recipients = [employees[j] for j in others]
        greeting = f"Hi {recipients[0].full_name.split()[0]}," if recipients else "Hi team,"
        content = f"{greeting} {body} Thanks, {owner.full_name}"
        title = f"{project} update"
        participants = [owner] + recipients
    elif kind == "file":
        others = _pick_others(rng, n, home, rng.randrange(0, 3)) if n > 1 else []
        authors = [owner] + [employees[j] for j in others]
        names = ", ".join(a.full_name for a in authors)
        content = (
            f"Prepared by {names}. This document covers the {project} for the"
            f" {DEPARTMENT_LABELS[dept]} team. {body}"
        )
        title = f"{project} brief"
        participants = authors
    elif kind == "calendar_event":
        others = _pick_others(rng, n, home, rng.randrange(2, 5)) if n > 2 else _pick_others(rng, n, home, min(1, n - 1))
        attendees = [owner] + [employees[j] for j in others]
        names = ", ".join(a.full_name for a in attendees)
        content = f"Agenda for {project}: {body} Attendees: {names}."
        title = f"{project} sync"
        participants = attendees
    else:  # chat_message
        others = _pick_others(rng, n, home, 1) if n > 1 else []
        peer = employees[others[0]] if others else owner
        content = f"@{peer.full_name.split()[0]} {body} -- {owner.full_name}"
        title = f"{project} ping"
        participants = [owner] + ([peer] if others else [])

    return DataItem(
        id=f"item-{idx + 1:06d}",
        kind=kind,
        title=title,
        content=content,
        participants=tuple(p.id for p in participants),
        created_at=created,
    )


def generate_corpus(config: GenConfig, content_provider: Optional[ContentProvider] = None) -> Corpus:
    """Generate the full synthetic corpus; a pure function of the config."""
    config.validate()
    if content_provider is not None:
        raise NotImplementedError("external content providers are wired at the CLI level only")
    rng = random.Random(config.seed)
    employees = _gen_employees(rng, config.n_employees)
    employees = inject_duplicate_names(employees, config.duplicate_name_rate, rng)
    kinds = _allocate_kinds(config.n_items, dict(config.kind_mix))
    rng.shuffle(kinds)
    items = [_gen_item(rng, i, kind, employees) for i, kind in enumerate(kinds)]
    return Corpus(employees=employees, items=items)


def serialize_corpus(corpus: Corpus) -> bytes:
    """Canonical serialization: sorted keys, fixed indentation, trailing newline."""
    doc = {
        "schema_version": SCHEMA_VERSION,
        "employees": [e.to_dict() for e in corpus.employees],
        "items": [i.to_dict() for i in corpus.items],
    }
    return (json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True) + "\n").encode("utf-8")


def _require(mapping: dict, key: str, where: str):
    if key not in mapping:
        raise ParseError(f"missing field '{key}'", where)
    return mapping[key]


def load_corpus(data: bytes) -> Corpus:
    """Parse and validate a serialized corpus; raises ParseError with location."""
    try:
        doc = json.loads(data.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise ParseError(f"not valid UTF-8: {exc}", f"byte {exc.start}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top-level document must be an object", "document root")
    version = _require(doc, "schema_version", "document root")
    if version != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {version}", "document root")

    employees = []
    for i, rec in enumerate(_require(doc, "employees", "document root")):
        where = f"employees[{i}]"
        if not isinstance(rec, dict):
            raise ParseError("employee record must be an object", where)
        dept = _require(rec, "department", where)
        if dept not in DEPARTMENTS:
            raise ParseError(f"unknown department '{dept}'", where)
        employees.append(Employee(
            id=_require(rec, "id", where),
            full_name=_require(rec, "full_name", where),
            title=_require(rec, "title", where),
            department=dept,
            profile=_require(rec, "profile", where),
        ))
    seen_emp = {e.id for e in employees}
    if len(seen_emp) != len(employees):
        raise ParseError("duplicate employee ids", "employees")

    items = []
    for i, rec in enumerate(_require(doc, "items", "document root")):
        where = f"items[{i}]"
        if not isinstance(rec, dict):
            raise ParseError("item record must be an object", where)
        kind = _require(rec, "kind", where)
        if kind not in KINDS:
            raise ParseError(f"unknown kind '{kind}'", where)
        participants = tuple(_require(rec, "participants", where))
        if not participants:
            raise ParseError("item needs at least one participant", where)
        for pid in participants:
            if pid not in seen_emp:
                raise ParseError(f"participant '{pid}' does not resolve to an employee", where)
        content = _require(rec, "content", where)
        if not content:
            raise ParseError("item content must be non-empty", where)
        items.append(DataItem(
            id=_require(rec, "id", where),
            kind=kind,
            title=_require(rec, "title", where),
            content=content,
            participants=participants,
            created_at=_require(rec, "created_at", where),
        ))
    if len({i.id for i in items}) != len(items):
        raise ParseError("duplicate item ids", "items")

    return Corpus(employees=employees, items=items)
