"""
Generador de reportes HTML para las autocomprobaciones.

Crea reportes con gráficos embebidos utilizando plantillas Jinja2 externas.
Las plantillas HTML y CSS se cargan desde src/templates/
(report_template.html y report_styles.css).
"""

import base64
import logging
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import markdown
from jinja2 import Environment, FileSystemLoader

from src.reporting import FrequencyRow, ScalingTable, SuiteResult, frequency_markdown


class SelftestReporter:  # pylint: disable=too-few-public-methods
    """
    Genera reportes HTML de una ejecución de `selftest`.

    Las plantillas se cargan desde archivos externos en src/templates/:
    - report_template.html: Estructura HTML del reporte
    - report_styles.css: Estilos CSS del reporte
    """

    def __init__(self, output_dir: str = "xor3_reports"):
        """
        Args:
            output_dir: Directorio donde guardar los reportes

        Raises:
            FileNotFoundError: Si el directorio de plantillas no existe
        """
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.logger = logging.getLogger(self.__class__.__name__)

        template_dir = Path(__file__).parent / "templates"
        if not template_dir.exists():
            raise FileNotFoundError(
                f"Templates directory not found at {template_dir}. "
                "Expected templates at src/templates/"
            )
        self.jinja_env = Environment(loader=FileSystemLoader(str(template_dir)))

    def generate_report(  # pylint: disable=too-many-arguments,too-many-positional-arguments
        self,
        results: Sequence[SuiteResult],
        scaling: Optional[ScalingTable],
        frequency: Sequence[FrequencyRow],
        charts: Dict[str, Path],
        config_echo: str,
        timestamp: str
    ) -> Path:
        """
        Genera un reporte HTML completo.

        Args:
            results: Resultado de cada suite ejecutada
            scaling: Tabla de escalado (None si la suite no se ejecutó)
            frequency: Tabla de frecuencia de testigos
            charts: Diccionario con rutas de gráficos generados
            config_echo: Línea de configuración usada
            timestamp: Timestamp del reporte

        Returns:
            Path al archivo HTML generado
        """
        try:
            embedded_charts = self._embed_charts(charts)
            html_content = self._render_template(results, scaling, frequency, embedded_charts, config_echo)

            output_path = self.output_dir / f"selftest_{timestamp}.html"
            with open(output_path, 'w', encoding='utf-8') as f:
                f.write(html_content)

            self.logger.info("Reporte HTML generado: %s", output_path)
            return output_path

        except Exception as e:
            self.logger.error("Error generando reporte HTML: %s", e)
            raise

    def _embed_charts(self, charts: Dict[str, Path]) -> Dict[str, str]:
        """Convierte las imágenes de gráficos a base64 para embeber en HTML."""
        embedded = {}
        for chart_type, chart_path in charts.items():
            try:
                if chart_path.exists():
                    with open(chart_path, 'rb') as f:
                        base64_data = base64.b64encode(f.read()).decode('utf-8')
                        embedded[chart_type] = f"data:image/png;base64,{base64_data}"
            except OSError as e:
                self.logger.warning("No se pudo embeber gráfico %s: %s", chart_type, e)

        return embedded

    @staticmethod
    def _summary_markdown(
        results: Sequence[SuiteResult],
        scaling: Optional[ScalingTable],
        frequency: Sequence[FrequencyRow]
    ) -> str:
        passed = sum(r.passed for r in results)
        parts: List[str] = [f"**{passed}/{len(results)}** suites passed."]
        failed = [r for r in results if not r.passed]
        if failed:
            parts.append("")
            parts += [f"- `{r.name}`: {r.failures[0] if r.failures else 'no checks ran'}" for r in failed]
        if scaling is not None:
            parts += ["", "### Proof size", "", scaling.as_markdown()]
        if frequency:
            parts += ["", "### Witness frequency", "", frequency_markdown(frequency)]
        return "\n".join(parts)

    def _render_template(  # pylint: disable=too-many-arguments,too-many-positional-arguments
        self,
        results: Sequence[SuiteResult],
        scaling: Optional[ScalingTable],
        frequency: Sequence[FrequencyRow],
        charts: Dict[str, str],
        config_echo: str
    ) -> str:
        template = self.jinja_env.get_template('report_template.html')
        styles = (Path(__file__).parent / "templates" / "report_styles.css").read_text(encoding='utf-8')

        summary_html = markdown.markdown(
            self._summary_markdown(results, scaling, frequency),
            extensions=['extra', 'sane_lists']
        )

        return template.render(
            report_date=datetime.now().strftime('%Y-%m-%d %H:%M:%S'),
            styles=styles,
            config_echo=config_echo,
            all_passed=all(r.passed for r in results),
            results=results,
            summary=summary_html,
            charts=charts
        )
