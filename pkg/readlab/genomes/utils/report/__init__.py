from .charts import Chart, RunTables, build_charts, entropy_chart, write_chart, write_charts
from .density import ns_density
from .svg import ChartKind, ChartSpec, Series, render_chart
