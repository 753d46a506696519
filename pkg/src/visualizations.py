"""
Módulo de visualizaciones para los reportes de autocomprobación.
Genera gráficos con matplotlib del escalado de pruebas y de la frecuencia de testigos.
"""

import logging
from pathlib import Path
from typing import Dict, Optional, Sequence

import matplotlib
matplotlib.use('Agg')  # Backend sin GUI para servidores
import matplotlib.pyplot as plt  # pylint: disable=wrong-import-position
import numpy as np  # pylint: disable=wrong-import-position

from src.reporting import FrequencyRow, ScalingTable  # pylint: disable=wrong-import-position


class ScalingVisualizer:
    """Genera visualizaciones de tamaños de prueba y testigos."""

    def __init__(self, output_dir: str = "xor3_reports"):
        """
        Inicializa el visualizador.

        Args:
            output_dir: Directorio donde guardar los gráficos
        """
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.logger = logging.getLogger(self.__class__.__name__)

        plt.rcParams['figure.figsize'] = (10, 6)
        plt.rcParams['font.size'] = 10

    def generate_all_charts(
        self,
        scaling: Optional[ScalingTable],
        frequency: Sequence[FrequencyRow],
        timestamp: str
    ) -> Dict[str, Path]:
        """
        Genera todos los gráficos disponibles.

        Returns:
            Diccionario con rutas de los gráficos generados
        """
        charts = {}

        try:
            if scaling is not None and scaling.rows:
                charts['size_scaling'] = self.plot_size_scaling(scaling, timestamp)
                self.logger.info("Gráfico de escalado generado: %s", charts['size_scaling'])

            if frequency:
                charts['witness_frequency'] = self.plot_witness_frequency(frequency, timestamp)
                self.logger.info("Gráfico de frecuencia de testigos generado: %s", charts['witness_frequency'])

        except (ValueError, OSError) as e:
            self.logger.error("Error generando gráficos: %s", e)

        return charts

    def plot_size_scaling(self, table: ScalingTable, timestamp: str) -> Path:
        """
        Tamaño de prueba frente a n en escala log-log, con el ajuste C·n^e.

        Returns:
            Path al archivo generado
        """
        ns = np.array([row.n for row in table.rows], dtype=float)
        sizes = np.array([row.size for row in table.rows], dtype=float)
        dense = np.linspace(ns.min(), ns.max(), 100)

        fig, ax = plt.subplots()
        ax.loglog(ns, sizes, marker='o', linewidth=0, markersize=7, color='#2E86AB', label='proof size')
        ax.loglog(dense, table.coefficient * dense ** table.exponent, linestyle='--', color='#A23B72',
                  label=f'{table.coefficient:.1f} · n^{table.exponent:.2f}')

        phases = sorted({name for row in table.rows for name in row.phases})
        for phase in phases:
            values = [row.phases.get(phase, 0) for row in table.rows]
            if any(values):
                ax.loglog(ns, values, marker='.', linewidth=1, alpha=0.6, label=phase)

        ax.set_title('Tamaño de la refutación (m = n, k = 2, t = 2, d = 2)', fontsize=14, fontweight='bold')
        ax.set_xlabel('n')
        ax.set_ylabel('tamaño')
        ax.grid(True, which='both', alpha=0.3)
        ax.legend()

        output_path = self.output_dir / f"size_scaling_{timestamp}.png"
        plt.savefig(output_path, dpi=100, bbox_inches='tight')
        plt.close(fig)
        return output_path

    def plot_witness_frequency(self, table: Sequence[FrequencyRow], timestamp: str) -> Path:
        """Barras agrupadas por n: fracción de fórmulas con testigo verificado por densidad."""
        n_values = sorted({row.n for row in table})
        densities = sorted({row.density for row in table})
        width = 0.8 / len(densities)
        lookup = {(row.n, row.density): row.fraction for row in table}

        fig, ax = plt.subplots()
        positions = np.arange(len(n_values))
        for offset, rho in enumerate(densities):
            heights = [lookup.get((n, rho), 0.0) for n in n_values]
            ax.bar(positions + offset * width, heights, width, label=f'm/n = {rho}')

        ax.set_xticks(positions + width * (len(densities) - 1) / 2)
        ax.set_xticklabels([str(n) for n in n_values])
        ax.set_ylim(0, 1)
        ax.set_title('Frecuencia de testigos verificados', fontsize=14, fontweight='bold')
        ax.set_xlabel('n')
        ax.set_ylabel('fracción')
        ax.grid(True, axis='y', alpha=0.3)
        ax.legend()

        output_path = self.output_dir / f"witness_frequency_{timestamp}.png"
        plt.savefig(output_path, dpi=100, bbox_inches='tight')
        plt.close(fig)
        return output_path
