"""
Caché de artefactos usando SQLite.
Evita regenerar refutaciones y repetir consultas al separador externo.
"""

import json
import sqlite3
import logging
from datetime import datetime, timedelta
from pathlib import Path
from typing import Optional, Dict, Any
from contextlib import contextmanager

from src.encoder import InstanceParams

TABLES = ("proofs_cache", "verdicts_cache")


class ArtifactCache:
    """Caché local de pruebas generadas y veredictos de oráculo."""

    def __init__(self, cache_dir: str = ".cache", ttl_hours: int = 24, db_name: str = "xor3_cache.db"):
        """
        Inicializa el caché.

        Args:
            cache_dir: Directorio para almacenar la base de datos de caché
            ttl_hours: Tiempo de vida del caché en horas (default: 24h)
            db_name: Nombre del archivo SQLite
        """
        self.cache_dir = Path(cache_dir)
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        self.db_path = self.cache_dir / db_name
        self.ttl_hours = ttl_hours
        self.logger = logging.getLogger(self.__class__.__name__)

        self._init_database()

    def _init_database(self):
        """Crea las tablas de caché si no existen."""
        with self._get_connection() as conn:
            cursor = conn.cursor()
            for table in TABLES:
                cursor.execute(f"""
                    CREATE TABLE IF NOT EXISTS {table} (
                        cache_key TEXT PRIMARY KEY,
                        data TEXT NOT NULL,
                        created_at TIMESTAMP NOT NULL,
                        expires_at TIMESTAMP NOT NULL
                    )
                """)
                cursor.execute(f"CREATE INDEX IF NOT EXISTS idx_{table}_expires ON {table}(expires_at)")
            conn.commit()
            self.logger.debug("Base de datos de caché inicializada en %s", self.db_path)

    @contextmanager
    def _get_connection(self):
        """Context manager para conexiones a la base de datos."""
        conn = sqlite3.connect(self.db_path)
        try:
            yield conn
        finally:
            conn.close()

    @staticmethod
    def _generate_cache_key(data_type: str, **params) -> str:
        """
        Clave única: "<tipo>:k=v_k=v" con los parámetros ordenados.
        """
        param_str = "_".join(f"{k}={v}" for k, v in sorted(params.items()))
        return f"{data_type}:{param_str}"

    def _get(self, table: str, cache_key: str) -> Optional[str]:
        with self._get_connection() as conn:
            cursor = conn.cursor()
            cursor.execute(f"SELECT data, expires_at FROM {table} WHERE cache_key = ?", (cache_key,))
            result = cursor.fetchone()

            if result is None:
                self.logger.info("Cache MISS para %s", cache_key)
                return None
            data, expires_at = result
            if datetime.now() < datetime.fromisoformat(expires_at):
                self.logger.info("Cache HIT para %s", cache_key)
                return data
            self.logger.info("Cache EXPIRED para %s", cache_key)
            cursor.execute(f"DELETE FROM {table} WHERE cache_key = ?", (cache_key,))
            conn.commit()
            return None

    def _set(self, table: str, cache_key: str, data: str) -> None:
        created_at = datetime.now()
        expires_at = created_at + timedelta(hours=self.ttl_hours)
        with self._get_connection() as conn:
            conn.execute(f"""
                INSERT OR REPLACE INTO {table}
                (cache_key, data, created_at, expires_at)
                VALUES (?, ?, ?, ?)
            """, (cache_key, data, created_at.isoformat(), expires_at.isoformat()))
            conn.commit()
        self.logger.info("%s cacheado, expira: %s", cache_key, expires_at)

    # ---- refutaciones ----

    def _proof_key(self, p: InstanceParams) -> str:
        return self._generate_cache_key("proof", n=p.n, m=p.m, k=p.k, t=p.t, d=p.d)

    def get_proof(self, p: InstanceParams) -> Optional[Dict[str, Any]]:
        """
        Obtiene una refutación cacheada.

        Returns:
            {"proof": texto, "phases": {...}} o None si no está o expiró
        """
        data = self._get("proofs_cache", self._proof_key(p))
        return json.loads(data) if data is not None else None

    def set_proof(self, p: InstanceParams, proof_text: str, phases: Dict[str, int]) -> None:
        self._set("proofs_cache", self._proof_key(p), json.dumps({"proof": proof_text, "phases": phases}))

    # ---- veredictos del separador ----

    def get_verdict(self, fingerprint: str, k: int, t: int, d: int) -> Optional[int]:
        data = self._get("verdicts_cache", self._generate_cache_key("verdict", f=fingerprint, k=k, t=t, d=d))
        return int(data) if data is not None else None

    def set_verdict(self, fingerprint: str, k: int, t: int, d: int, bit: int) -> None:
        self._set("verdicts_cache", self._generate_cache_key("verdict", f=fingerprint, k=k, t=t, d=d), str(bit))

    # ---- mantenimiento ----

    def clear_expired(self) -> int:
        """Elimina todas las entradas expiradas del caché."""
        now = datetime.now().isoformat()
        total_deleted = 0
        with self._get_connection() as conn:
            cursor = conn.cursor()
            for table in TABLES:
                cursor.execute(f"DELETE FROM {table} WHERE expires_at < ?", (now,))
                total_deleted += cursor.rowcount
            conn.commit()

        if total_deleted > 0:
            self.logger.info("Eliminadas %s entradas expiradas del caché", total_deleted)
        return total_deleted

    def clear_all(self) -> None:
        """Limpia todo el caché."""
        with self._get_connection() as conn:
            for table in TABLES:
                conn.execute(f"DELETE FROM {table}")
            conn.commit()

        self.logger.info("Caché completo eliminado")

    def get_cache_stats(self) -> Dict[str, Any]:
        """
        Obtiene estadísticas del caché.

        Returns:
            Diccionario con totales, válidos y expirados por tabla
        """
        now = datetime.now().isoformat()
        stats: Dict[str, Any] = {}
        with self._get_connection() as conn:
            cursor = conn.cursor()
            for table in TABLES:
                cursor.execute(f"SELECT COUNT(*) FROM {table}")
                total = cursor.fetchone()[0]
                cursor.execute(f"SELECT COUNT(*) FROM {table} WHERE expires_at > ?", (now,))
                valid = cursor.fetchone()[0]
                stats[table.replace("_cache", "")] = {"total": total, "valid": valid, "expired": total - valid}

        stats["ttl_hours"] = self.ttl_hours
        stats["cache_dir"] = str(self.cache_dir)
        stats["db_size_bytes"] = self.db_path.stat().st_size if self.db_path.exists() else 0
        return stats
