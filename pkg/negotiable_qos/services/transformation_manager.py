"""
Transformation manager for upgrading older model documents to the current format.
"""

import copy
import re
from typing import Any, Dict, Tuple

from negotiable_qos import VERSION
from negotiable_qos.errors import InvalidModel
from negotiable_qos.transformations import v0_1_add_change_rule, v0_2_add_aggregator

_VERSION_PATTERN = re.compile(r'^V(\d+(?:\.\d+)*)$')


def version_key(version: str) -> Tuple[int, ...]:
    """'V0.10' -> (0, 10), so versions order numerically rather than as text."""
    match = _VERSION_PATTERN.match(str(version).strip())
    if not match:
        raise InvalidModel(f"unrecognised model document version '{version}'")
    return tuple(int(part) for part in match.group(1).split('.'))


class TransformationManager:
    def __init__(self, version, transformations):
        self.version = version
        self.transformations = transformations  # List of (version, transform_fn)

    def document_version(self, document: Dict[str, Any]) -> Tuple[int, ...]:
        return version_key(document.get('version', 'V0.0'))

    def needs_upgrade(self, document: Dict[str, Any]) -> bool:
        return self.document_version(document) < version_key(self.version)

    def apply_transformations(self, document: Dict[str, Any]) -> Dict[str, Any]:
        """Returns an upgraded copy of a loaded model document. Files on disk are never rewritten."""
        if not self.needs_upgrade(document):
            return document
        document_version = self.document_version(document)
        upgraded = copy.deepcopy(document)
        # Apply transformations in sequence
        for version, transform_fn in self.transformations:
            if document_version < version_key(version):
                upgraded = transform_fn(upgraded)
        return upgraded


default_transformations = [
    ("V0.1", v0_1_add_change_rule.transform),
    ("V0.2", v0_2_add_aggregator.transform),
]

transformation_manager = TransformationManager(
    VERSION,
    default_transformations
)
