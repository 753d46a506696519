"""Módulo de excepciones compartidas para evitar problemas de identidad en tests."""

from typing import Optional


class ConfigError(RuntimeError):
    """Error relacionado con la configuración."""
    pass


class Xor3Error(Exception):
    """Base de todos los errores del toolkit."""
    pass


class FormatError(Xor3Error, ValueError):
    """Artefacto de texto mal formado (DIMACS, witness, proof, instance, prodmap)."""

    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class PreconditionError(Xor3Error, ValueError):
    """Se violó la precondición de una operación."""
    pass


class BudgetExceeded(Xor3Error):
    """Un límite de fuerza bruta o de presupuesto fue superado."""

    def __init__(self, message: str, explored: int = 0):
        self.explored = explored
        super().__init__(message)


class ConvergenceError(BudgetExceeded):
    """La iteración de potencia no alcanzó la tolerancia en max_iter pasos."""
    pass


class ProofCheckError(Xor3Error):
    """Un fragmento generado no pasó el verificador."""

    def __init__(self, message: str, line_id: Optional[int] = None):
        self.line_id = line_id
        super().__init__(message)


class OracleError(Xor3Error):
    """El separador externo falló o devolvió una respuesta inválida."""
    pass
