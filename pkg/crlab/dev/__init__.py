class CrlabWarning(Warning):
    """Base class for crlab warnings."""
