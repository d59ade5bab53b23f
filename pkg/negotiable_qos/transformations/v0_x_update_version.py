"""
Transformation: Update the version field of a model document to the current package version.
"""
from .. import VERSION

def transform(document: dict) -> dict:
    """Set the document version to the current package version."""
    document['version'] = VERSION
    return document
